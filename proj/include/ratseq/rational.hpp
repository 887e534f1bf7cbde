#pragma once

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <string>
#include <string_view>

#include "ratseq/errors.hpp"

namespace ratseq {

/*
 * Exact rational number in canonical form: the denominator is positive,
 * numerator and denominator are coprime, zero is 0/1.
 *
 * Storage is a GMP mpq_t; every operation leaves the value canonical.
 *
 * Text form: [+-]?[0-9]+(/[0-9]+)?  with a nonzero denominator.
 */
class ExactRational {
 public:
  ExactRational() = default;

  // Integers convert implicitly so that `ExactRational x = 3;` reads naturally.
  ExactRational(std::int64_t value) : q_(static_cast<long>(value)) {}  // NOLINT

  ExactRational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw domain_error("rational with zero denominator");
    q_ = mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    q_.canonicalize();
  }

  ExactRational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw domain_error("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }

  static ExactRational parse(std::string_view text) {
    auto is_digits = [](std::string_view s) {
      if (s.empty()) return false;
      for (char c : s)
        if (c < '0' || c > '9') return false;
      return true;
    };
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
      negative = body.front() == '-';
      body.remove_prefix(1);
    }
    auto slash = body.find('/');
    std::string_view num = body.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
    if (!is_digits(num) || !is_digits(den))
      throw parse_error("malformed rational literal '" + std::string(text) + "'");
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) throw parse_error("zero denominator in rational literal '" + std::string(text) + "'");
    if (negative) n = -n;
    return ExactRational(n, d);
  }

  /// "p/q", or "p" when the denominator is one.
  std::string str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }

  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }

  double to_double() const { return q_.get_d(); }

  /// ln|x|, accurate even when |x| lies outside the double range.
  double log_abs() const {
    if (is_zero()) throw domain_error("logarithm of zero");
    return log_abs_mpz(q_.get_num()) - log_abs_mpz(q_.get_den());
  }

  ExactRational abs() const { return from_mpq(::abs(q_)); }

  ExactRational reciprocal() const {
    if (is_zero()) throw domain_error("reciprocal of zero");
    return from_mpq(1 / q_);
  }

  /// Integer power; negative exponents need a nonzero base.
  ExactRational pow(std::int64_t exponent) const {
    if (exponent < 0) return reciprocal().pow(-exponent);
    mpz_class num, den;
    auto e = static_cast<unsigned long>(exponent);
    mpz_pow_ui(num.get_mpz_t(), q_.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), q_.get_den_mpz_t(), e);
    mpq_class r;
    // powers of coprime parts stay coprime
    mpz_swap(mpq_numref(r.get_mpq_t()), num.get_mpz_t());
    mpz_swap(mpq_denref(r.get_mpq_t()), den.get_mpz_t());
    return from_mpq(std::move(r));
  }

  ExactRational& operator+=(const ExactRational& o) { q_ += o.q_; return *this; }
  ExactRational& operator-=(const ExactRational& o) { q_ -= o.q_; return *this; }
  ExactRational& operator*=(const ExactRational& o) { q_ *= o.q_; return *this; }
  ExactRational& operator/=(const ExactRational& o) {
    if (o.is_zero()) throw domain_error("division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend ExactRational operator+(ExactRational a, const ExactRational& b) {
    a += b;
    return a;
  }
  friend ExactRational operator-(ExactRational a, const ExactRational& b) {
    a -= b;
    return a;
  }
  friend ExactRational operator*(ExactRational a, const ExactRational& b) {
    a *= b;
    return a;
  }
  friend ExactRational operator/(ExactRational a, const ExactRational& b) {
    a /= b;
    return a;
  }
  friend ExactRational operator-(const ExactRational& a) { return from_mpq(-a.q_); }

  friend bool operator==(const ExactRational& a, const ExactRational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExactRational& r) { return os << r.str(); }

 private:
  static_assert(sizeof(long) == sizeof(std::int64_t), "LP64 platform required for int64 conversions");

  static ExactRational from_mpq(mpq_class q) {
    ExactRational r;
    r.q_ = std::move(q);
    return r;
  }

  static double log_abs_mpz(const mpz_class& z) {
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::numbers::ln2;
  }

  mpq_class q_;
};

}  // namespace ratseq
