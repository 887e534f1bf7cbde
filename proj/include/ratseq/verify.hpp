#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ratseq/closed_form.hpp"
#include "ratseq/core_model.hpp"
#include "ratseq/recurrence_engine.hpp"
#include "ratseq/symmetry_lab.hpp"

namespace ratseq {

struct RandomInstance {
  InitialConditions ic;
  CoefficientStream coeffs;
};

/*
 * Deterministic random instances. Every trial gets its own engine seeded
 * from (seed, trial), so instance t does not depend on how many instances
 * were drawn before it.
 *
 * Rationals have numerator in [-9, 9] \ {0} and denominator in [1, 9].
 * Stream kinds cycle constant, periodic (period 1..6), explicit list.
 */
class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : seed_(seed) {}

  static ExactRational draw_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(1, 9);
    std::uniform_int_distribution<int> den(1, 9);
    std::bernoulli_distribution negative(0.5);
    int p = num(rng);
    return ExactRational(negative(rng) ? -p : p, den(rng));
  }

  std::mt19937_64 engine_for(std::uint64_t trial) const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    return std::mt19937_64(seq);
  }

  RandomInstance draw(std::uint64_t trial, std::int64_t horizon) const {
    auto rng = engine_for(trial);
    InitialConditions ic{draw_rational(rng), draw_rational(rng), draw_rational(rng), draw_rational(rng)};
    auto pair = [&] { return CoefficientPair{draw_rational(rng), draw_rational(rng)}; };
    switch (trial % 3) {
      case 0: {
        auto c = pair();
        return {ic, CoefficientStream::constant(c.a, c.b)};
      }
      case 1: {
        std::uniform_int_distribution<int> period(1, 6);
        std::vector<CoefficientPair> pairs(static_cast<std::size_t>(period(rng)));
        for (auto& p : pairs) p = pair();
        return {ic, CoefficientStream::periodic(std::move(pairs))};
      }
      default: {
        std::vector<CoefficientPair> pairs(static_cast<std::size_t>(std::max<std::int64_t>(horizon, 1)));
        for (auto& p : pairs) p = pair();
        return {ic, CoefficientStream::explicit_list(std::move(pairs))};
      }
    }
  }

 private:
  std::uint64_t seed_;
};

/// A failing instance, cut down to the coefficients the failing index needs.
struct Witness {
  std::uint64_t trial = 0;
  InitialConditions ic;
  CoefficientStream coeffs;
  std::int64_t index = 0;
  std::string expected;
  std::string got;
};

enum class TrialOutcome { matched, skipped_singular, mismatch };

struct TrialResult {
  TrialOutcome outcome = TrialOutcome::matched;
  std::int64_t checked = 0;
  std::optional<Witness> witness;
};

struct VerifyOptions {
  std::int64_t trials = 100;
  std::int64_t horizon = 297;
  std::uint64_t seed = 1;
  double tolerance = 1e-10;
  std::int64_t samples = 500;
  // Swap the closed form for x_closed_fixed_block_bounds (negative control).
  bool inject_fault = false;
};

/*
 * One oracle-equivalence trial: iterate exactly, then require
 *   - the closed form to equal every iterated value,
 *   - V_{k+1} = a_k V_k + b_k for every defined k,
 *   - single-index x_closed to agree at the last index of each residue class.
 * Singular trajectories are skipped.
 */
inline TrialResult run_trial(const RandomInstance& inst, std::uint64_t trial, std::int64_t horizon,
                             bool inject_fault) {
  TrialResult result;
  Trajectory traj = iterate(inst.ic, inst.coeffs, horizon);
  if (traj.is_singular() || !inst.ic.all_nonzero()) {
    result.outcome = TrialOutcome::skipped_singular;
    return result;
  }

  auto fail = [&](std::int64_t m, const ExactRational& expected, const std::string& got) {
    result.outcome = TrialOutcome::mismatch;
    // x_m needs a_0..a_{m-1}; the fixed-bounds evaluator reads six further pairs
    std::int64_t needed = std::max<std::int64_t>(m, 0) + (inject_fault ? 6 : 0);
    result.witness = Witness{trial, inst.ic, inst.coeffs.truncated(static_cast<std::size_t>(needed)), m,
                             expected.str(), got};
    return result;
  };

  if (inject_fault) {
    for (std::int64_t m = first_x_index; m <= horizon; ++m) {
      ExactRational got;
      try {
        got = x_closed_fixed_block_bounds(inst.ic, inst.coeffs, m);
      } catch (const index_out_of_range&) {
        continue;
      } catch (const domain_error&) {
        return fail(m, traj.at(m), "undefined");
      }
      ++result.checked;
      if (got != traj.at(m)) return fail(m, traj.at(m), got.str());
    }
    return result;
  }

  std::vector<ExactRational> closed;
  try {
    closed = closed_trajectory(inst.ic, inst.coeffs, horizon);
  } catch (const domain_error&) {
    return fail(first_x_index, traj.at(first_x_index), "undefined");
  }
  for (std::int64_t m = first_x_index; m <= horizon; ++m) {
    const auto& got = closed[static_cast<std::size_t>(m - first_x_index)];
    ++result.checked;
    if (got != traj.at(m)) return fail(m, traj.at(m), got.str());
  }

  auto v = v_sequence(traj);
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    const auto& c = inst.coeffs.at(static_cast<std::int64_t>(k));
    if (v[k + 1] != c.a * v[k] + c.b) {
      auto m = static_cast<std::int64_t>(k + 1);
      return fail(m, traj.at(m), "reduction identity broken at V_" + std::to_string(k + 1));
    }
  }

  for (std::int64_t m = std::max(first_x_index, horizon - 5); m <= horizon; ++m) {
    ExactRational got = x_closed(inst.ic, inst.coeffs, m);
    if (got != traj.at(m)) return fail(m, traj.at(m), got.str());
  }
  return result;
}

struct SymmetrySample {
  std::int64_t n = 0;
  double u_n = 1, u_n1 = 1, u_n3 = 1, A = 1, B = 1;
};

/// u components and A, B uniform in [1/2, 2], n uniform in 0..23.
inline std::vector<SymmetrySample> symmetry_samples(std::uint64_t seed, std::int64_t count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(0.5, 2.0);
  std::uniform_int_distribution<std::int64_t> index(0, 23);
  std::vector<SymmetrySample> out(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  for (auto& s : out) {
    s.n = index(rng);
    s.u_n = value(rng);
    s.u_n1 = value(rng);
    s.u_n3 = value(rng);
    s.A = value(rng);
    s.B = value(rng);
  }
  return out;
}

inline double max_symmetry_residual(const Characteristic& ch, const std::vector<SymmetrySample>& samples) {
  double worst = 0.0;
  for (const auto& s : samples)
    worst = std::max(worst, std::abs(symmetry_residual(ch, s.n, s.u_n, s.u_n1, s.u_n3, s.A, s.B)));
  return worst;
}

struct SymmetryRow {
  std::string characteristic;
  std::int64_t samples = 0;
  double max_residual = 0.0;
  double threshold = 0.0;
  bool expect_zero = true;

  // Admissible characteristics must stay below the threshold; the control must exceed it.
  bool pass() const { return expect_zero ? max_residual <= threshold : max_residual >= threshold; }
};

inline constexpr double negative_control_threshold = 1e-3;

/// Rows for the three admissible characteristics plus the g = 1 control.
inline std::vector<SymmetryRow> symmetry_sweep(std::uint64_t seed, std::int64_t count, double tolerance) {
  auto samples = symmetry_samples(seed, count);
  std::vector<SymmetryRow> rows;
  for (const auto& ch : {Characteristic::alternating(), Characteristic::gamma(), Characteristic::gamma_conjugate()})
    rows.push_back({ch.name, count, max_symmetry_residual(ch, samples), tolerance, true});
  auto control = Characteristic::custom([](std::int64_t) { return ComplexValue(1.0, 0.0); }, "control-constant");
  rows.push_back({control.name, count, max_symmetry_residual(control, samples), negative_control_threshold, false});
  return rows;
}

struct VerifyReport {
  std::int64_t trials = 0;
  std::int64_t skipped = 0;
  std::int64_t checked = 0;
  double max_symmetry_residual = 0.0;
  bool all_exact_match = true;
  bool symmetry_pass = true;
  std::optional<Witness> witness;

  bool passed() const { return all_exact_match && symmetry_pass; }
};

inline VerifyReport run_verify(const VerifyOptions& opt) {
  VerifyReport report;
  InstanceGenerator gen(opt.seed);
  for (std::int64_t t = 0; t < opt.trials; ++t) {
    auto trial = static_cast<std::uint64_t>(t);
    auto result = run_trial(gen.draw(trial, opt.horizon), trial, opt.horizon, opt.inject_fault);
    ++report.trials;
    report.checked += result.checked;
    if (result.outcome == TrialOutcome::skipped_singular) ++report.skipped;
    if (result.outcome == TrialOutcome::mismatch) {
      report.all_exact_match = false;
      if (!report.witness) report.witness = result.witness;
    }
  }
  if (opt.trials > 0) {
    for (const auto& row : symmetry_sweep(opt.seed, opt.samples, opt.tolerance)) {
      if (row.expect_zero) report.max_symmetry_residual = std::max(report.max_symmetry_residual, row.max_residual);
      report.symmetry_pass = report.symmetry_pass && row.pass();
    }
  }
  return report;
}

}  // namespace ratseq
