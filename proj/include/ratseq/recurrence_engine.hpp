#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ratseq/core_model.hpp"

namespace ratseq {

/// One application of x_{n+1} = x_{n-3} x_n / (x_{n-2} (a_n + b_n x_{n-3} x_n)).
///
/// The x_{n-2} factor is checked before the bracket, so a step where both
/// vanish reports zero-x-factor.
inline ExactRational step(const ExactRational& x_nm3, const ExactRational& x_nm2, const ExactRational& x_n,
                          const ExactRational& a_n, const ExactRational& b_n) {
  if (x_nm2.is_zero()) throw singular_error(SingularCause::zero_x_factor);
  ExactRational w = x_nm3 * x_n;
  ExactRational bracket = a_n + b_n * w;
  if (bracket.is_zero()) throw singular_error(SingularCause::zero_bracket);
  return w / (x_nm2 * bracket);
}

/// Exact values x_{-3} .. x_{horizon}, truncated at the first singular step.
inline Trajectory iterate(const InitialConditions& ic, const CoefficientStream& coeffs, std::int64_t horizon) {
  if (horizon < 0) throw index_out_of_range("iteration horizon must be nonnegative");
  if (horizon > 0 && !coeffs.covers(horizon - 1))
    throw index_out_of_range("iteration horizon " + std::to_string(horizon) + " exceeds coefficient horizon");

  std::vector<ExactRational> xs{ic.x_m3, ic.x_m2, ic.x_m1, ic.x_0};
  xs.reserve(static_cast<std::size_t>(horizon) + 4);
  // xs[n + 3] holds x_n
  for (std::int64_t n = 0; n < horizon; ++n) {
    const auto& c = coeffs.at(n);
    auto i = static_cast<std::size_t>(n);
    try {
      xs.push_back(step(xs[i], xs[i + 1], xs[i + 3], c.a, c.b));
    } catch (const singular_error& e) {
      return Trajectory(std::move(xs), SingularReport{n, e.cause()});
    }
  }
  return Trajectory(std::move(xs), std::nullopt);
}

inline std::optional<SingularReport> detect_singularity(const InitialConditions& ic, const CoefficientStream& coeffs,
                                                        std::int64_t horizon) {
  return iterate(ic, coeffs, horizon).singular();
}

/// V_k = 1/(x_{k-3} x_k) for k = 0 .. last index of the trajectory.
inline std::vector<ExactRational> v_sequence(const Trajectory& traj) {
  std::vector<ExactRational> v;
  std::int64_t last = traj.last_index();
  v.reserve(static_cast<std::size_t>(last + 1));
  for (std::int64_t k = 0; k <= last; ++k) {
    ExactRational w = traj.at(k - 3) * traj.at(k);
    if (w.is_zero()) throw undefined_v_error("V_" + std::to_string(k) + " needs nonzero x_" + std::to_string(k - 3) +
                                             " and x_" + std::to_string(k));
    v.push_back(w.reciprocal());
  }
  return v;
}

}  // namespace ratseq
