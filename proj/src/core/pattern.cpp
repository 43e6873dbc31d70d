#include "core/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "core/error.hpp"

namespace qr {

std::vector<int> SimpleGraphPattern::degrees() const {
  std::vector<int> d(s, 0);
  for (auto [u, v] : edges) {
    ++d[u];
    ++d[v];
  }
  return d;
}

namespace {

bool pattern_connected(const SimpleGraphPattern& p) {
  if (p.s == 0) return false;
  std::vector<std::vector<int>> adj(p.s);
  for (auto [u, v] : p.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(p.s, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
  }
  return count == p.s;
}

}  // namespace

bool SimpleGraphPattern::is_cycle() const {
  if (s < 3 || static_cast<int>(edges.size()) != s) return false;
  for (int d : degrees())
    if (d != 2) return false;
  return pattern_connected(*this);
}

bool SimpleGraphPattern::is_path() const {
  if (s == 1) return edges.empty();
  if (static_cast<int>(edges.size()) != s - 1) return false;
  for (int d : degrees())
    if (d > 2) return false;
  return pattern_connected(*this);
}

SimpleGraphPattern make_pattern(int s, std::vector<std::pair<int, int>> edges) {
  if (s < 1 || s > 8)
    fail(ErrorCode::invalid_argument, "pattern: vertex count must be in 1..8");
  std::set<std::pair<int, int>> seen;
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
    if (e.first < 0 || e.second >= s)
      fail(ErrorCode::invalid_argument, "pattern: edge endpoint out of range");
    if (e.first == e.second)
      fail(ErrorCode::invalid_argument, "pattern: loops are not allowed");
    if (!seen.insert(e).second)
      fail(ErrorCode::invalid_argument, "pattern: duplicate edge");
  }
  std::sort(edges.begin(), edges.end());
  return SimpleGraphPattern{s, std::move(edges)};
}

SimpleGraphPattern parse_pattern(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) fail(ErrorCode::parse, "pattern: empty spec");

  if (t == "vertex") return make_pattern(1, {});
  if (t == "edge") return make_pattern(2, {{0, 1}});

  auto alias_size = [&](char prefix) -> int {
    if (t.size() < 2 || t[0] != prefix) return -1;
    int v = 0;
    for (size_t i = 1; i < t.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return -1;
      v = v * 10 + (t[i] - '0');
    }
    return v;
  };

  if (int c = alias_size('C'); c > 0) {
    if (c < 3 || c > 8) fail(ErrorCode::parse, "pattern: cycle alias must be C3..C8");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < c; ++i) edges.push_back({i, (i + 1) % c});
    return make_pattern(c, std::move(edges));
  }
  if (int k = alias_size('K'); k > 0) {
    if (k > 5) fail(ErrorCode::parse, "pattern: complete alias must be K1..K5");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) edges.push_back({i, j});
    return make_pattern(k, std::move(edges));
  }
  if (int p = alias_size('P'); p > 0) {
    if (p > 8) fail(ErrorCode::parse, "pattern: path alias must be P1..P8");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < p; ++i) edges.push_back({i, i + 1});
    return make_pattern(p, std::move(edges));
  }

  const size_t semi = t.find(';');
  if (semi == std::string::npos)
    fail(ErrorCode::parse, "pattern: unknown alias and no explicit 's; u-v,...' form");
  int s = 0;
  for (size_t i = 0; i < semi; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(t[i])))
      fail(ErrorCode::parse, "pattern: bad vertex count");
    s = s * 10 + (t[i] - '0');
  }
  std::vector<std::pair<int, int>> edges;
  size_t pos = semi + 1;
  while (pos < t.size()) {
    size_t comma = t.find(',', pos);
    if (comma == std::string::npos) comma = t.size();
    const std::string item = t.substr(pos, comma - pos);
    if (!item.empty()) {
      const size_t dash = item.find('-');
      if (dash == std::string::npos || dash == 0 || dash + 1 >= item.size())
        fail(ErrorCode::parse, "pattern: bad edge token '" + item + "'");
      edges.push_back({std::stoi(item.substr(0, dash)), std::stoi(item.substr(dash + 1))});
    }
    pos = comma + 1;
  }
  return make_pattern(s, std::move(edges));
}

}  // namespace qr
