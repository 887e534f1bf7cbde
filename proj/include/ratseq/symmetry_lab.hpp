#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <type_traits>
#include <utility>

#include "ratseq/core_model.hpp"
#include "ratseq/recurrence_engine.hpp"

namespace ratseq {

// Floating-point checks of the symmetry structure of
//     u_{n+4} = u_n u_{n+3} / (u_{n+1} (A_n + B_n u_n u_{n+3})).
// All indices in this header are u-indices.

using ComplexValue = std::complex<double>;

namespace detail {

inline constexpr double half_sqrt3 = 0.86602540378443864676;

// gamma^k = exp(i pi k / 3) for k = 0..5
inline constexpr std::array<std::pair<double, double>, 6> gamma_table{{
    {1.0, 0.0},
    {0.5, half_sqrt3},
    {-0.5, half_sqrt3},
    {-1.0, 0.0},
    {-0.5, -half_sqrt3},
    {0.5, -half_sqrt3},
}};

constexpr int mod6(std::int64_t n) { return static_cast<int>(((n % 6) + 6) % 6); }

}  // namespace detail

/// gamma^n for gamma = exp(i pi / 3), from a six-entry table.
inline ComplexValue gamma_power(std::int64_t n) {
  auto [re, im] = detail::gamma_table[static_cast<std::size_t>(detail::mod6(n))];
  return {re, im};
}

struct GammaPower {
  std::int64_t exponent = 0;
  ComplexValue value;

  explicit GammaPower(std::int64_t n) : exponent(n), value(gamma_power(n)) {}
};

/// xi(n, u) = g(n) u.
struct Characteristic {
  enum class Label { alternating, gamma, gamma_conjugate, custom };

  std::function<ComplexValue(std::int64_t)> g;
  Label label = Label::custom;
  std::string name;

  ComplexValue xi(std::int64_t n, ComplexValue u) const { return g(n) * u; }

  static Characteristic alternating() {
    return {[](std::int64_t n) { return ComplexValue(n % 2 == 0 ? 1.0 : -1.0, 0.0); }, Label::alternating,
            "alternating"};
  }
  static Characteristic gamma() { return {[](std::int64_t n) { return gamma_power(n); }, Label::gamma, "gamma"}; }
  static Characteristic gamma_conjugate() {
    return {[](std::int64_t n) { return std::conj(gamma_power(n)); }, Label::gamma_conjugate, "gamma-conjugate"};
  }
  static Characteristic custom(std::function<ComplexValue(std::int64_t)> g, std::string name = "custom") {
    return {std::move(g), Label::custom, std::move(name)};
  }
};

/// Right-hand side of the recurrence in u-indexing.
///
/// Exact arguments throw singular_error on a zero denominator; floating
/// arguments throw conditioning_error when |denominator| <= 1e-12.
template <class T>
T phi(const T& u_n, const T& u_n1, const T& u_n3, const T& A, const T& B) {
  T w = u_n * u_n3;
  T bracket = A + B * w;
  if constexpr (std::is_same_v<T, ExactRational>) {
    if (u_n1.is_zero()) throw singular_error(SingularCause::zero_x_factor);
    if (bracket.is_zero()) throw singular_error(SingularCause::zero_bracket);
  } else {
    using std::abs;
    if (abs(u_n1 * bracket) <= 1e-12) throw conditioning_error("phi denominator below 1e-12");
  }
  return w / (u_n1 * bracket);
}

/*
 * Residual of the linearized symmetry condition at a free sample
 * (u_n, u_{n+1}, u_{n+3}, A_n, B_n):
 *
 *   xi(n+4, phi) - A u_n xi(n+3, u_{n+3}) / (u_{n+1} D^2)
 *                + u_n u_{n+3} xi(n+1, u_{n+1}) / (u_{n+1}^2 D)
 *                - A u_{n+3} xi(n, u_n) / (u_{n+1} D^2),     D = A + B u_n u_{n+3}.
 *
 * The condition is an identity in the sample variables, so samples need not
 * lie on a trajectory.
 */
inline ComplexValue symmetry_residual(const Characteristic& ch, std::int64_t n, double u_n, double u_n1, double u_n3,
                                      double A, double B) {
  double d = A + B * u_n * u_n3;
  if (std::fabs(d) <= 1e-9 || std::fabs(u_n1) <= 1e-9) throw conditioning_error("sample too close to a pole");
  double phi_value = u_n * u_n3 / (u_n1 * d);
  return ch.xi(n + 4, phi_value) - A * u_n * ch.xi(n + 3, u_n3) / (u_n1 * d * d) +
         u_n * u_n3 * ch.xi(n + 1, u_n1) / (u_n1 * u_n1 * d) - A * u_n3 * ch.xi(n, u_n) / (u_n1 * d * d);
}

/// g(n) + g(n+3); zero for every admissible characteristic.
inline ComplexValue constraint_residual(const Characteristic& ch, std::int64_t n) { return ch.g(n) + ch.g(n + 3); }

/// S_n = gamma^{-n} ln|u_n|.
inline ComplexValue canonical_coordinate(std::int64_t n, double u_n) {
  if (u_n == 0.0) throw domain_error("canonical coordinate of zero");
  return gamma_power(-n) * std::log(std::fabs(u_n));
}

inline ComplexValue canonical_coordinate(std::int64_t n, const ExactRational& u_n) {
  return gamma_power(-n) * u_n.log_abs();
}

struct InvariantCheck {
  ComplexValue tilde_v;
  double v_match_error = 0.0;
};

/// Invariant V~_n = gamma^n S_n + gamma^{n+3} S_{n+3}, compared through
/// exp(-V~_n) against |V_n| taken from the exact trajectory.
inline InvariantCheck invariant_check(const Trajectory& traj, std::int64_t n) {
  const auto& u_n = traj.u(n);
  const auto& u_n3 = traj.u(n + 3);
  if (u_n.is_zero() || u_n3.is_zero()) throw undefined_v_error("invariant needs nonzero u_n and u_{n+3}");
  ComplexValue tilde_v = gamma_power(n) * canonical_coordinate(n, u_n) +
                         gamma_power(n + 3) * canonical_coordinate(n + 3, u_n3);
  if (std::fabs(tilde_v.imag()) > 1e-10) throw conditioning_error("invariant has a non-negligible imaginary part");
  double v_exact = (u_n * u_n3).reciprocal().abs().to_double();
  return {tilde_v, std::fabs(std::exp(-tilde_v.real()) - v_exact)};
}

/// H(n, k) = gamma^n conj(gamma)^k.
inline ComplexValue hh(std::int64_t n, std::int64_t k) { return gamma_power(n) * std::conj(gamma_power(k)); }

/// (1/3) [(-1)^{n-k} + 2 Re H(n, k)] evaluated in floating point.
inline double weight_formula(std::int64_t n, std::int64_t k) {
  double sign = (n - k) % 2 == 0 ? 1.0 : -1.0;
  return (sign + 2.0 * hh(n, k).real()) / 3.0;
}

/// Integer value of the log-sum weight for index distance d = n - k.
inline int weight(std::int64_t d) {
  switch (detail::mod6(d)) {
    case 0: return 1;
    case 3: return -1;
    default: return 0;
  }
}

/// exp(H_j): |u_j| for j in 0..2, |V_{j-3}| |u_j| for j in 3..5.
inline double h_factor(int j, const Trajectory& traj) {
  if (j < 0 || j > 5) throw index_out_of_range("residue outside 0..5");
  const auto& uj = traj.u(j);
  if (uj.is_zero()) throw undefined_v_error("h factor needs nonzero u_j");
  if (j <= 2) return uj.abs().to_double();
  ExactRational w = traj.u(j - 3) * uj;
  if (w.is_zero()) throw undefined_v_error("h factor needs nonzero V_{j-3}");
  return (w.reciprocal() * uj).abs().to_double();
}

namespace detail {

inline double log_abs_v(const Trajectory& traj, std::int64_t k) {
  ExactRational w = traj.u(k) * traj.u(k + 3);
  if (w.is_zero()) throw undefined_v_error("V_" + std::to_string(k) + " undefined");
  return -w.log_abs();
}

}  // namespace detail

/// |u_{6n+j}| = exp(H_j + sum_{k<6n+j} weight(6n+j-k) ln|V_k|).
inline double log_reconstruct(int j, std::int64_t n, const Trajectory& traj) {
  if (n < 0) throw index_out_of_range("block index must be nonnegative");
  double log_h = std::log(h_factor(j, traj));
  std::int64_t top = 6 * n + j;
  double sum = 0.0;
  for (std::int64_t k = 0; k < top; ++k) {
    int w = weight(top - k);
    if (w != 0) sum += w * detail::log_abs_v(traj, k);
  }
  return std::exp(log_h + sum);
}

/// Same magnitude summed block by block: ln|u_j| + sum_s (ln|V_{6s+j}| - ln|V_{6s+j+3}|).
inline double log_reconstruct_telescoped(int j, std::int64_t n, const Trajectory& traj) {
  if (n < 0) throw index_out_of_range("block index must be nonnegative");
  double sum = traj.u(j).log_abs();
  for (std::int64_t s = 0; s < n; ++s) {
    std::int64_t k = 6 * s + j;
    sum += detail::log_abs_v(traj, k) - detail::log_abs_v(traj, k + 3);
  }
  return std::exp(sum);
}

}  // namespace ratseq
