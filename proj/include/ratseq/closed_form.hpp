#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ratseq/core_model.hpp"
#include "ratseq/reduced_solver.hpp"

namespace ratseq {

/*
 * Closed-form evaluation of x_m.
 *
 * With V_k = 1/(u_k u_{k+3}) the recurrence gives u_{k+6} = u_k V_k / V_{k+3},
 * so for m = 6n + j - 3
 *
 *     x_m = u_j * prod_{s=0}^{n-1} V_{6s+j} / V_{6s+j+3}.
 *
 * Dividing numerator and denominator by V_0 = 1/(x_{-3} x_0), each V_k turns
 * into W_k = product_k + x_{-3} x_0 sum_k (see LinearPrefix). u_0..u_3 are the
 * seeds; u_4 = x_1 and u_5 = x_2 come from the two prefactor formulas below.
 */

namespace detail {

inline void require_nonzero_seeds(const InitialConditions& ic) {
  if (!ic.all_nonzero()) throw zero_initial_error("closed form needs nonzero x_{-3}, x_{-2}, x_{-1}, x_0");
}

inline void require_coefficients_through(const CoefficientStream& coeffs, std::int64_t m) {
  if (m >= 1 && !coeffs.covers(m - 1))
    throw index_out_of_range("x-index " + std::to_string(m) + " needs coefficients beyond the stream horizon");
}

inline ExactRational checked_ratio(const ExactRational& num, const ExactRational& den, const char* what) {
  if (den.is_zero()) throw singular_closed_form_error(std::string("vanishing denominator in ") + what);
  return num / den;
}

/// W_0 .. W_last for the given stream, W_k = product_k + q sum_k.
inline std::vector<ExactRational> scaled_v_values(const CoefficientStream& coeffs, const ExactRational& q,
                                                  std::int64_t last) {
  std::vector<ExactRational> w;
  w.reserve(static_cast<std::size_t>(last + 1));
  LinearPrefix prefix;
  for (std::int64_t k = 0; k <= last; ++k) {
    if (k > 0) prefix.advance(coeffs);
    w.push_back(prefix.scaled_value(q));
  }
  return w;
}

}  // namespace detail

/// One factor V_{6s+j} / V_{6s+j+3} of the block product.
///
/// The index fields are the upper bounds of the coefficient products in the
/// numerator (6s+j-1) and denominator (6s+j+2).
struct BlockFactor {
  std::int64_t s = 0;
  std::int64_t numerator_index = 0;
  std::int64_t denominator_index = 0;
  ExactRational value;
};

/// u_j for j = 0..5: a seed for j <= 3, x_1 for j = 4, x_2 for j = 5.
inline ExactRational prefactor(int j, const InitialConditions& ic, const CoefficientStream& coeffs) {
  if (j < 0 || j > 5) throw index_out_of_range("residue " + std::to_string(j) + " outside 0..5");
  if (j <= 3) return ic.u(j);
  ExactRational q = ic.x_m3 * ic.x_0;
  const auto& c0 = coeffs.at(0);
  if (j == 4) return detail::checked_ratio(q, ic.x_m2 * (c0.a + c0.b * q), "x_1 prefactor");
  const auto& c1 = coeffs.at(1);
  return detail::checked_ratio(q, ic.x_m1 * (c0.a * c1.a + (c1.a * c0.b + c1.b) * q), "x_2 prefactor");
}

/// The n block factors of x_m, in order s = 0 .. n-1.
inline std::vector<BlockFactor> block_factors(const InitialConditions& ic, const CoefficientStream& coeffs,
                                              std::int64_t m) {
  BlockIndex bi = decompose_index(m);
  std::vector<BlockFactor> out;
  if (bi.block == 0) return out;
  detail::require_coefficients_through(coeffs, m);
  // largest V index needed: 6(n-1) + j + 3 = m
  auto w = detail::scaled_v_values(coeffs, ic.x_m3 * ic.x_0, m);
  out.reserve(static_cast<std::size_t>(bi.block));
  for (std::int64_t s = 0; s < bi.block; ++s) {
    std::int64_t k = 6 * s + bi.residue;
    auto idx = static_cast<std::size_t>(k);
    out.push_back(BlockFactor{s, k - 1, k + 2, detail::checked_ratio(w[idx], w[idx + 3], "block factor")});
  }
  return out;
}

/// x_m for any coefficient stream, m >= -3.
inline ExactRational x_closed(const InitialConditions& ic, const CoefficientStream& coeffs, std::int64_t m) {
  detail::require_nonzero_seeds(ic);
  BlockIndex bi = decompose_index(m);
  detail::require_coefficients_through(coeffs, m);
  ExactRational x = prefactor(bi.residue, ic, coeffs);
  for (const auto& f : block_factors(ic, coeffs, m)) x *= f.value;
  return x;
}

/// x_{-3} .. x_horizon from the closed form in one pass: the block products
/// of all six residue classes are accumulated together.
inline std::vector<ExactRational> closed_trajectory(const InitialConditions& ic, const CoefficientStream& coeffs,
                                                    std::int64_t horizon) {
  detail::require_nonzero_seeds(ic);
  if (horizon < 0) throw index_out_of_range("horizon must be nonnegative");
  detail::require_coefficients_through(coeffs, horizon);
  std::int64_t last_u = u_index_of(horizon);
  auto w = detail::scaled_v_values(coeffs, ic.x_m3 * ic.x_0, horizon);
  std::vector<ExactRational> u;
  u.reserve(static_cast<std::size_t>(last_u + 1));
  for (std::int64_t k = 0; k <= last_u; ++k) {
    if (k < 6) {
      u.push_back(prefactor(static_cast<int>(k), ic, coeffs));
      continue;
    }
    auto i = static_cast<std::size_t>(k - 6);
    u.push_back(u[i] * detail::checked_ratio(w[i], w[i + 3], "block factor"));
  }
  return u;
}

/*
 * Product with every factor taken at the outer block index n, i.e.
 * W_{6n+j} / W_{6n+j+3} repeated n times. This is NOT a solution of the
 * recurrence; the verifier uses it as a known-wrong evaluator.
 */
inline ExactRational x_closed_fixed_block_bounds(const InitialConditions& ic, const CoefficientStream& coeffs,
                                                 std::int64_t m) {
  detail::require_nonzero_seeds(ic);
  BlockIndex bi = decompose_index(m);
  ExactRational x = prefactor(bi.residue, ic, coeffs);
  if (bi.block == 0) return x;
  std::int64_t k = 6 * bi.block + bi.residue;
  detail::require_coefficients_through(coeffs, k + 3);
  auto w = detail::scaled_v_values(coeffs, ic.x_m3 * ic.x_0, k + 3);
  auto idx = static_cast<std::size_t>(k);
  return x * detail::checked_ratio(w[idx], w[idx + 3], "block factor").pow(bi.block);
}

// ---------------------------------------------------------------------------
// Constant coefficients a_n = a, b_n = b.

enum class ConstantBranch { unit_ratio, geometric, alternating };

/// Short tag used in CLI output: a1, aneq1, aneg1.
inline const char* branch_tag(ConstantBranch b) {
  switch (b) {
    case ConstantBranch::unit_ratio: return "a1";
    case ConstantBranch::geometric: return "aneq1";
    case ConstantBranch::alternating: return "aneg1";
  }
  return "";
}

inline ConstantBranch constant_branch(const ExactRational& a) {
  if (a == ExactRational(1)) return ConstantBranch::unit_ratio;
  if (a == ExactRational(-1)) return ConstantBranch::alternating;
  return ConstantBranch::geometric;
}

namespace detail {

/// u_j with constants: seeds, c = q/(x_{-2}(a + bq)), d = q/(x_{-1}(a^2 + (ab + b)q)), q = x_{-3} x_0.
inline ExactRational constant_prefactor(int j, const InitialConditions& ic, const ExactRational& a,
                                        const ExactRational& b) {
  if (j <= 3) return ic.u(j);
  ExactRational q = ic.x_m3 * ic.x_0;
  if (j == 4) return checked_ratio(q, ic.x_m2 * (a + b * q), "prefactor c");
  return checked_ratio(q, ic.x_m1 * (a * a + (a * b + b) * q), "prefactor d");
}

}  // namespace detail

/// a = 1: factors (1 + (6s+j) q) / (1 + (6s+j+3) q) with q = b x_{-3} x_0.
inline ExactRational x_closed_unit_ratio(const InitialConditions& ic, const ExactRational& b, std::int64_t m) {
  detail::require_nonzero_seeds(ic);
  BlockIndex bi = decompose_index(m);
  ExactRational one(1);
  ExactRational q = b * ic.x_m3 * ic.x_0;
  ExactRational x = detail::constant_prefactor(bi.residue, ic, one, b);
  for (std::int64_t s = 0; s < bi.block; ++s) {
    std::int64_t k = 6 * s + bi.residue;
    x *= detail::checked_ratio(one + ExactRational(k) * q, one + ExactRational(k + 3) * q, "block factor");
  }
  return x;
}

/// a != 1: factors (a^k + q (1 - a^k)/(1 - a)) / (a^{k+3} + q (1 - a^{k+3})/(1 - a)), k = 6s+j.
inline ExactRational x_closed_geometric(const InitialConditions& ic, const ExactRational& a, const ExactRational& b,
                                        std::int64_t m) {
  if (a == ExactRational(1)) throw domain_error("geometric branch needs a != 1");
  detail::require_nonzero_seeds(ic);
  BlockIndex bi = decompose_index(m);
  ExactRational one(1);
  ExactRational q = b * ic.x_m3 * ic.x_0;
  ExactRational inv_one_minus_a = (one - a).reciprocal();
  ExactRational a3 = a.pow(3);
  ExactRational a6 = a3 * a3;
  ExactRational ak = a.pow(bi.residue);
  ExactRational x = detail::constant_prefactor(bi.residue, ic, a, b);
  for (std::int64_t s = 0; s < bi.block; ++s, ak *= a6) {
    ExactRational ak3 = ak * a3;
    ExactRational num = ak + q * (one - ak) * inv_one_minus_a;
    ExactRational den = ak3 + q * (one - ak3) * inv_one_minus_a;
    x *= detail::checked_ratio(num, den, "block factor");
  }
  return x;
}

/// a = -1: x_{6n+j-3} = u_j (-1 + b x_{-3} x_0)^{+n} for odd j, ^{-n} for even j,
/// with x_1 = x_{-3} x_0 / (x_{-2}(-1 + b x_{-3} x_0)) and x_2 = x_{-3} x_0 / x_{-1}.
inline ExactRational x_closed_a_neg1(const InitialConditions& ic, const ExactRational& b, std::int64_t m) {
  detail::require_nonzero_seeds(ic);
  BlockIndex bi = decompose_index(m);
  ExactRational q = ic.x_m3 * ic.x_0;
  ExactRational base = b * q - ExactRational(1);
  if (base.is_zero()) throw singular_closed_form_error("-1 + b x_{-3} x_0 vanishes");
  ExactRational head;
  switch (bi.residue) {
    case 4: head = q / (ic.x_m2 * base); break;
    case 5: head = q / ic.x_m1; break;
    default: head = ic.u(bi.residue); break;
  }
  std::int64_t exponent = bi.residue % 2 == 1 ? bi.block : -bi.block;
  return head * base.pow(exponent);
}

inline ExactRational x_closed_constant(const InitialConditions& ic, const ExactRational& a, const ExactRational& b,
                                       std::int64_t m) {
  switch (constant_branch(a)) {
    case ConstantBranch::unit_ratio: return x_closed_unit_ratio(ic, b, m);
    case ConstantBranch::alternating: return x_closed_a_neg1(ic, b, m);
    case ConstantBranch::geometric: break;
  }
  return x_closed_geometric(ic, a, b, m);
}

}  // namespace ratseq
