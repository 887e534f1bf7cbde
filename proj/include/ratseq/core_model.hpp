#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ratseq/errors.hpp"
#include "ratseq/rational.hpp"

namespace ratseq {

// Index conventions
// -----------------
// Public APIs speak x-indices m >= -3 (x_{-3}, ..., x_0 are the seeds).
// Formula code speaks u-indices k = m + 3, so u_0..u_3 are the seeds and the
// recurrence reads u_{k+4} = u_k u_{k+3} / (u_{k+1} (a_k + b_k u_k u_{k+3})).
// The coefficient index n is shared by both: x_{n+1} and u_{n+4} use (a_n, b_n).

inline constexpr std::int64_t first_x_index = -3;

constexpr std::int64_t u_index_of(std::int64_t x_index) { return x_index + 3; }
constexpr std::int64_t x_index_of(std::int64_t u_index) { return u_index - 3; }

/// m = 6n + j - 3 with block n >= 0 and residue j in [0, 5].
struct BlockIndex {
  std::int64_t block = 0;
  int residue = 0;

  constexpr std::int64_t u_index() const { return 6 * block + residue; }
  constexpr std::int64_t x_index() const { return x_index_of(u_index()); }

  friend constexpr bool operator==(const BlockIndex&, const BlockIndex&) = default;
};

inline BlockIndex decompose_index(std::int64_t m) {
  if (m < first_x_index) throw index_out_of_range("x-index " + std::to_string(m) + " is below -3");
  std::int64_t k = u_index_of(m);
  return BlockIndex{k / 6, static_cast<int>(k % 6)};
}

struct CoefficientPair {
  ExactRational a;
  ExactRational b;

  friend bool operator==(const CoefficientPair&, const CoefficientPair&) = default;
};

/// The coefficient sequences n -> (a_n, b_n).
///
/// Three shapes: a constant pair, a repeating period of pairs, or a finite
/// explicit list. Only explicit lists have a horizon; querying past it is an
/// error rather than a silent default.
class CoefficientStream {
 public:
  enum class Kind { constant, periodic, list };

  static CoefficientStream constant(ExactRational a, ExactRational b) {
    return CoefficientStream(Kind::constant, {CoefficientPair{std::move(a), std::move(b)}});
  }

  static CoefficientStream periodic(std::vector<CoefficientPair> period) {
    if (period.empty()) throw domain_error("periodic stream needs at least one pair");
    return CoefficientStream(Kind::periodic, std::move(period));
  }

  static CoefficientStream explicit_list(std::vector<CoefficientPair> pairs) {
    return CoefficientStream(Kind::list, std::move(pairs));
  }

  Kind kind() const { return kind_; }
  const std::vector<CoefficientPair>& payload() const { return pairs_; }

  /// Number of admissible n for list streams; nullopt for unbounded streams.
  std::optional<std::size_t> horizon() const {
    if (kind_ == Kind::list) return pairs_.size();
    return std::nullopt;
  }

  bool covers(std::int64_t n) const {
    return n >= 0 && (kind_ != Kind::list || static_cast<std::size_t>(n) < pairs_.size());
  }

  const CoefficientPair& at(std::int64_t n) const {
    if (n < 0) throw index_out_of_range("coefficient index " + std::to_string(n) + " is negative");
    switch (kind_) {
      case Kind::constant:
        return pairs_.front();
      case Kind::periodic:
        return pairs_[static_cast<std::size_t>(n) % pairs_.size()];
      case Kind::list:
        break;
    }
    if (static_cast<std::size_t>(n) >= pairs_.size())
      throw index_out_of_range("coefficient index " + std::to_string(n) + " beyond list horizon " +
                               std::to_string(pairs_.size()));
    return pairs_[static_cast<std::size_t>(n)];
  }

  /// Human-readable description, e.g. "constant(a=1,b=2)".
  std::string describe() const {
    if (kind_ == Kind::constant)
      return "constant(a=" + pairs_[0].a.str() + ",b=" + pairs_[0].b.str() + ")";
    std::string out = kind_ == Kind::periodic ? "periodic[" : "list[";
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      if (i) out += ";";
      out += "(" + pairs_[i].a.str() + "," + pairs_[i].b.str() + ")";
    }
    return out + "]";
  }

  /// List streams cut to their first `count` pairs; unbounded streams unchanged.
  CoefficientStream truncated(std::size_t count) const {
    if (kind_ != Kind::list || count >= pairs_.size()) return *this;
    return explicit_list(std::vector<CoefficientPair>(pairs_.begin(), pairs_.begin() + static_cast<std::ptrdiff_t>(count)));
  }

 private:
  CoefficientStream(Kind kind, std::vector<CoefficientPair> pairs) : kind_(kind), pairs_(std::move(pairs)) {}

  Kind kind_;
  std::vector<CoefficientPair> pairs_;
};

inline std::pair<ExactRational, ExactRational> stream_at(const CoefficientStream& stream, std::int64_t n) {
  const auto& p = stream.at(n);
  return {p.a, p.b};
}

/// The seeds x_{-3}, x_{-2}, x_{-1}, x_0.
struct InitialConditions {
  ExactRational x_m3;
  ExactRational x_m2;
  ExactRational x_m1;
  ExactRational x_0;

  /// Seed by u-index 0..3.
  const ExactRational& u(int k) const {
    switch (k) {
      case 0: return x_m3;
      case 1: return x_m2;
      case 2: return x_m1;
      case 3: return x_0;
      default: throw index_out_of_range("seed u-index " + std::to_string(k) + " outside 0..3");
    }
  }

  bool all_nonzero() const { return !x_m3.is_zero() && !x_m2.is_zero() && !x_m1.is_zero() && !x_0.is_zero(); }

  std::string describe() const {
    return x_m3.str() + "," + x_m2.str() + "," + x_m1.str() + "," + x_0.str();
  }

  friend bool operator==(const InitialConditions&, const InitialConditions&) = default;
};

/// First vanishing denominator met while iterating.
struct SingularReport {
  std::int64_t step = 0;  // the n at which x_{n+1} failed
  SingularCause cause = SingularCause::zero_x_factor;

  friend bool operator==(const SingularReport&, const SingularReport&) = default;
};

/// Exact values x_{-3}, x_{-2}, ... up to a horizon or to the first singular
/// step. Nothing exists past a singularity.
class Trajectory {
 public:
  Trajectory(std::vector<ExactRational> values, std::optional<SingularReport> singular)
      : values_(std::move(values)), singular_(singular) {
    if (values_.size() < 4) throw domain_error("trajectory must contain the four seeds");
  }

  std::int64_t first_index() const { return first_x_index; }
  std::int64_t last_index() const { return first_x_index + static_cast<std::int64_t>(values_.size()) - 1; }
  std::size_t size() const { return values_.size(); }

  bool contains(std::int64_t m) const { return m >= first_x_index && m <= last_index(); }

  const ExactRational& at(std::int64_t m) const {
    if (!contains(m))
      throw index_out_of_range("x-index " + std::to_string(m) + " not in trajectory [-3, " +
                               std::to_string(last_index()) + "]");
    return values_[static_cast<std::size_t>(m - first_x_index)];
  }

  /// Value by u-index k (= x_{k-3}).
  const ExactRational& u(std::int64_t k) const { return at(x_index_of(k)); }

  const std::vector<ExactRational>& values() const { return values_; }
  const std::optional<SingularReport>& singular() const { return singular_; }
  bool is_singular() const { return singular_.has_value(); }

 private:
  std::vector<ExactRational> values_;
  std::optional<SingularReport> singular_;
};

}  // namespace ratseq
