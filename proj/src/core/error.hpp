#pragma once

#include <stdexcept>
#include <string>

namespace qr {

enum class ErrorCode {
  invalid_argument,
  parse,
  empty_graph,
  disconnected,
  cap_exceeded,
  budget_exceeded,
  resample_exhausted,
  degenerate_subset,
  rank_deficient,
  isolated_class,
  no_structure,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace qr
