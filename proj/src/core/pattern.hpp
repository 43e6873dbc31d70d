#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qr {

// Small simple graph used as a counting pattern (at most 8 vertices).
struct SimpleGraphPattern {
  int s = 0;
  std::vector<std::pair<int, int>> edges;  // unordered pairs, u < v

  std::vector<int> degrees() const;
  bool is_cycle() const;  // connected, all degrees 2, |E| == s, s >= 3
  bool is_path() const;   // connected, |E| == s-1, max degree <= 2
};

SimpleGraphPattern make_pattern(int s, std::vector<std::pair<int, int>> edges);

// Accepts builtin aliases C3..C8 (cycles), K1..K5 (complete), P1..P8 (paths
// on t vertices), "vertex", "edge", or the explicit form "s; u-v,u-v,...".
SimpleGraphPattern parse_pattern(const std::string& text);

}  // namespace qr
