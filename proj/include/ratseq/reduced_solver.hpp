#pragma once

#include <cstdint>

#include "ratseq/core_model.hpp"

namespace ratseq {

/// V at a given index, as produced from a trajectory or a closed form.
struct VState {
  std::int64_t index = 0;
  ExactRational value;
};

inline ExactRational v_step(const ExactRational& v, const ExactRational& a_n, const ExactRational& b_n) {
  return a_n * v + b_n;
}

/*
 * Running parts of the closed form of V_{n+1} = a_n V_n + b_n:
 *
 *     V_n = V_0 * product_n + sum_n,
 *     product_n = a_0 a_1 ... a_{n-1},
 *     sum_n     = sum_{l<n} b_l a_{l+1} ... a_{n-1}.
 *
 * advance() moves from n to n+1 in two multiplications and one addition.
 */
class LinearPrefix {
 public:
  std::int64_t count() const { return count_; }
  const ExactRational& product() const { return product_; }
  const ExactRational& sum() const { return sum_; }

  void advance(const ExactRational& a, const ExactRational& b) {
    product_ *= a;
    sum_ *= a;
    sum_ += b;
    ++count_;
  }

  void advance(const CoefficientStream& coeffs) {
    const auto& c = coeffs.at(count_);
    advance(c.a, c.b);
  }

  /// V_n for the given V_0.
  ExactRational value(const ExactRational& v0) const { return v0 * product_ + sum_; }

  /// V_n / V_0 expressed through 1/V_0: product_n + inv_v0 * sum_n.
  ExactRational scaled_value(const ExactRational& inv_v0) const { return product_ + inv_v0 * sum_; }

 private:
  std::int64_t count_ = 0;
  ExactRational product_{1};
  ExactRational sum_{0};
};

inline ExactRational v_closed(const ExactRational& v0, const CoefficientStream& coeffs, std::int64_t n) {
  if (n < 0) throw index_out_of_range("v_closed index must be nonnegative");
  LinearPrefix prefix;
  while (prefix.count() < n) prefix.advance(coeffs);
  return prefix.value(v0);
}

/// Constant coefficients: v0 + n b when a = 1, else v0 a^n + b (1 - a^n)/(1 - a).
inline ExactRational v_closed_constant(const ExactRational& v0, const ExactRational& a, const ExactRational& b,
                                       std::int64_t n) {
  if (n < 0) throw index_out_of_range("v_closed_constant index must be nonnegative");
  if (a == ExactRational(1)) return v0 + ExactRational(n) * b;
  ExactRational an = a.pow(n);
  return v0 * an + b * (ExactRational(1) - an) / (ExactRational(1) - a);
}

}  // namespace ratseq
