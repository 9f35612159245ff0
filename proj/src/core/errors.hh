#pragma once

#include <stdexcept>
#include <string>

namespace sh {

// Error taxonomy shared by the core and the C API. Codes are stable: the
// public header mirrors them one-to-one.
enum class ErrorCode : int {
  ok = 0,
  invalid_argument = 1,
  non_elliptic = 2,
  spectrum_hit = 3,
  under_resolved = 4,
  divergent_local_integral = 5,
  no_convergence = 6,
  non_periodic_shift = 7,
  branch_violation = 8,
  insufficient_resolution = 9,
  degenerate_trial = 10,
  sign_error = 11,
  no_feasible_envelope = 12,
  method_unavailable = 13,
  node_failure = 14,
  mass_below_floor = 15,
  config_error = 16,
  io_error = 17,
  internal = 18,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool cond, ErrorCode code, const std::string& message) {
  if (!cond) fail(code, message);
}

}  // namespace sh
