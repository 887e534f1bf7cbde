#pragma once

// Test-only helpers: random generators and brute-force oracles that do not
// share code paths with the library routines they check.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "ratseq/core_model.hpp"

namespace ratseq::testing {

inline ExactRational random_rational(std::mt19937_64& rng, int max_abs = 9, bool allow_zero = false) {
  std::uniform_int_distribution<int> num(allow_zero ? -max_abs : 1, max_abs);
  std::uniform_int_distribution<int> den(1, max_abs);
  std::bernoulli_distribution negative(0.5);
  int p = num(rng);
  if (!allow_zero && negative(rng)) p = -p;
  return ExactRational(p, den(rng));
}

inline InitialConditions random_seeds(std::mt19937_64& rng) {
  return {random_rational(rng), random_rational(rng), random_rational(rng), random_rational(rng)};
}

/// kind 0 constant, 1 periodic (period 1..6), 2 explicit list of `length` pairs.
inline CoefficientStream random_stream(std::mt19937_64& rng, int kind, std::size_t length) {
  auto pair = [&] { return CoefficientPair{random_rational(rng), random_rational(rng)}; };
  if (kind == 0) {
    auto p = pair();
    return CoefficientStream::constant(p.a, p.b);
  }
  std::vector<CoefficientPair> pairs;
  std::size_t count = kind == 1 ? std::uniform_int_distribution<std::size_t>(1, 6)(rng) : length;
  for (std::size_t i = 0; i < count; ++i) pairs.push_back(pair());
  if (kind == 1) return CoefficientStream::periodic(std::move(pairs));
  return CoefficientStream::explicit_list(std::move(pairs));
}

/// x_{-3}..x_horizon by literal substitution; nullopt on a zero denominator.
inline std::optional<std::vector<ExactRational>> substitute_forward(const InitialConditions& ic,
                                                                   const CoefficientStream& coeffs,
                                                                   std::int64_t horizon) {
  std::vector<ExactRational> x{ic.x_m3, ic.x_m2, ic.x_m1, ic.x_0};
  for (std::int64_t n = 0; n < horizon; ++n) {
    auto i = static_cast<std::size_t>(n) + 3;  // x_n
    ExactRational den = x[i - 2] * (coeffs.at(n).a + coeffs.at(n).b * x[i - 3] * x[i]);
    if (den.is_zero()) return std::nullopt;
    x.push_back(x[i - 3] * x[i] / den);
  }
  return x;
}

/// V_n = V_0 prod_{k<n} a_k + sum_{l<n} b_l prod_{l<k<n} a_k with every product re-evaluated.
inline ExactRational nested_v_closed(const ExactRational& v0, const CoefficientStream& coeffs, std::int64_t n) {
  ExactRational head(1);
  for (std::int64_t k = 0; k < n; ++k) head *= coeffs.at(k).a;
  ExactRational total = v0 * head;
  for (std::int64_t l = 0; l < n; ++l) {
    ExactRational term = coeffs.at(l).b;
    for (std::int64_t k = l + 1; k < n; ++k) term *= coeffs.at(k).a;
    total += term;
  }
  return total;
}

inline ExactRational fold_v_step(ExactRational v, const CoefficientStream& coeffs, std::int64_t n) {
  for (std::int64_t k = 0; k < n; ++k) v = coeffs.at(k).a * v + coeffs.at(k).b;
  return v;
}

inline ExactRational R(std::int64_t p, std::int64_t q = 1) { return ExactRational(p, q); }

inline InitialConditions ones() { return {R(1), R(1), R(1), R(1)}; }

}  // namespace ratseq::testing
