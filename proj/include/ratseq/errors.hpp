#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ratseq {

/// Base of every exception thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (rational literals, configuration files).
class parse_error : public error {
 public:
  using error::error;
};

/// An index outside the admissible range, or a coefficient query past a
/// stream's declared horizon.
class index_out_of_range : public error {
 public:
  using error::error;
};

/// Mathematical domain violations: division by zero, vanishing
/// denominators, zero seeds where the closed form needs them.
class domain_error : public error {
 public:
  using error::error;
};

enum class SingularCause {
  zero_x_factor,  // x_{n-2} = 0
  zero_bracket,   // a_n + b_n x_{n-3} x_n = 0
};

inline const char* to_string(SingularCause cause) {
  return cause == SingularCause::zero_x_factor ? "zero-x-factor" : "zero-bracket";
}

/// A vanishing denominator in one step of the recurrence. `step` is the n
/// whose successor x_{n+1} could not be formed, or -1 when unknown.
class singular_error : public domain_error {
 public:
  singular_error(SingularCause cause, std::int64_t step = -1)
      : domain_error(std::string("singular step (") + to_string(cause) + ")"),
        cause_(cause),
        step_(step) {}

  SingularCause cause() const noexcept { return cause_; }
  std::int64_t step() const noexcept { return step_; }

 private:
  SingularCause cause_;
  std::int64_t step_;
};

/// V_k = 1/(x_{k-3} x_k) requested where one of the factors is zero.
class undefined_v_error : public domain_error {
 public:
  using domain_error::domain_error;
};

/// The closed form was asked to work from a zero seed.
class zero_initial_error : public domain_error {
 public:
  using domain_error::domain_error;
};

/// A denominator of the closed-form product vanished.
class singular_closed_form_error : public domain_error {
 public:
  using domain_error::domain_error;
};

/// Floating-point evaluation too close to a pole to be trusted.
class conditioning_error : public domain_error {
 public:
  using domain_error::domain_error;
};

}  // namespace ratseq
