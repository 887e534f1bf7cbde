#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ratseq/closed_form.hpp"
#include "ratseq/core_model.hpp"
#include "ratseq/recurrence_engine.hpp"
#include "ratseq/verify.hpp"

namespace ratseq::cli {

// Exit statuses.
inline constexpr int exit_ok = 0;
inline constexpr int exit_verification_failure = 1;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_domain_error = 3;

// ---------------------------------------------------------------------------
// Records

using FieldValue = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

struct Field {
  std::string name;
  FieldValue value;
};

using Record = std::vector<Field>;

inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

inline std::string csv_cell(const FieldValue& v) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(const std::string& s) const {
      std::string out = "\"";
      for (char c : s) {
        if (c == '"') out += '"';
        out += c;
      }
      return out + "\"";
    }
  };
  return std::visit(Visitor{}, v);
}

/// Header from the first record; every record of a table shares its field names.
inline void write_csv(std::ostream& os, const std::vector<Record>& records) {
  if (records.empty()) return;
  for (std::size_t i = 0; i < records.front().size(); ++i) os << (i ? "," : "") << records.front()[i].name;
  os << "\n";
  for (const auto& r : records) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i].value);
    os << "\n";
  }
}

inline nlohmann::ordered_json to_json(const Record& r) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (const auto& f : r) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::monostate>)
            obj[f.name] = nullptr;
          else
            obj[f.name] = v;
        },
        f.value);
  }
  return obj;
}

inline void write_jsonl(std::ostream& os, const std::vector<Record>& records) {
  for (const auto& r : records) os << to_json(r).dump() << "\n";
}

enum class OutputFormat { csv, jsonl };

inline void write_records(std::ostream& os, const std::vector<Record>& records, OutputFormat fmt) {
  if (fmt == OutputFormat::csv)
    write_csv(os, records);
  else
    write_jsonl(os, records);
}

// ---------------------------------------------------------------------------
// Configuration

/*
 * Config file (JSON):
 *   {"initial": {"x_m3": "1", "x_m2": "1", "x_m1": "1", "x_0": "1"},
 *    "coefficients": {"kind": "constant", "a": "1", "b": "1"}
 *                  | {"kind": "periodic" | "list", "pairs": [["1","0"], ...]},
 *    "horizon": 10}
 * plus optional mode settings: index, trials, seed, tolerance, samples.
 * Unknown keys are rejected.
 */
struct RunConfig {
  std::optional<InitialConditions> initial;
  std::optional<CoefficientStream> coefficients;
  std::optional<std::int64_t> horizon;
  std::optional<std::int64_t> index;
  std::optional<std::int64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::optional<std::int64_t> samples;
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                                const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw parse_error("unknown key '" + key + "' in " + where);
  }
}

inline ExactRational rational_field(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw parse_error("missing key '" + std::string(key) + "' in " + where);
  const auto& v = obj.at(key);
  if (!v.is_string()) throw parse_error("'" + std::string(key) + "' in " + where + " must be a rational string");
  return ExactRational::parse(v.get<std::string>());
}

inline std::int64_t int_field(const nlohmann::json& v, const char* key) {
  if (!v.is_number_integer()) throw parse_error("'" + std::string(key) + "' must be an integer");
  return v.get<std::int64_t>();
}

inline std::vector<CoefficientPair> parse_pairs(const nlohmann::json& coeffs) {
  if (!coeffs.contains("pairs") || !coeffs.at("pairs").is_array())
    throw parse_error("coefficients need a 'pairs' array");
  std::vector<CoefficientPair> pairs;
  for (const auto& p : coeffs.at("pairs")) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
      throw parse_error("each coefficient pair must be [\"a\", \"b\"]");
    pairs.push_back({ExactRational::parse(p[0].get<std::string>()), ExactRational::parse(p[1].get<std::string>())});
  }
  return pairs;
}

inline CoefficientStream parse_stream(const nlohmann::json& coeffs) {
  if (!coeffs.is_object()) throw parse_error("'coefficients' must be an object");
  if (!coeffs.contains("kind") || !coeffs.at("kind").is_string()) throw parse_error("coefficients need a 'kind'");
  auto kind = coeffs.at("kind").get<std::string>();
  if (kind == "constant") {
    reject_unknown_keys(coeffs, {"kind", "a", "b"}, "constant coefficients");
    return CoefficientStream::constant(rational_field(coeffs, "a", "coefficients"),
                                       rational_field(coeffs, "b", "coefficients"));
  }
  if (kind == "periodic" || kind == "list") {
    reject_unknown_keys(coeffs, {"kind", "pairs"}, kind + " coefficients");
    auto pairs = parse_pairs(coeffs);
    if (kind == "list") return CoefficientStream::explicit_list(std::move(pairs));
    if (pairs.empty()) throw parse_error("periodic coefficients need at least one pair");
    return CoefficientStream::periodic(std::move(pairs));
  }
  throw parse_error("unknown coefficient kind '" + kind + "'");
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw parse_error("config must be a JSON object");
  detail::reject_unknown_keys(doc, {"initial", "coefficients", "horizon", "index", "trials", "seed", "tolerance", "samples"},
                              "config");
  RunConfig cfg;
  if (doc.contains("initial")) {
    const auto& init = doc.at("initial");
    if (!init.is_object()) throw parse_error("'initial' must be an object");
    detail::reject_unknown_keys(init, {"x_m3", "x_m2", "x_m1", "x_0"}, "initial");
    cfg.initial = InitialConditions{detail::rational_field(init, "x_m3", "initial"),
                                    detail::rational_field(init, "x_m2", "initial"),
                                    detail::rational_field(init, "x_m1", "initial"),
                                    detail::rational_field(init, "x_0", "initial")};
  }
  if (doc.contains("coefficients")) cfg.coefficients = detail::parse_stream(doc.at("coefficients"));
  if (doc.contains("horizon")) cfg.horizon = detail::int_field(doc.at("horizon"), "horizon");
  if (doc.contains("index")) cfg.index = detail::int_field(doc.at("index"), "index");
  if (doc.contains("trials")) cfg.trials = detail::int_field(doc.at("trials"), "trials");
  if (doc.contains("seed")) {
    auto s = detail::int_field(doc.at("seed"), "seed");
    if (s < 0) throw parse_error("'seed' must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (doc.contains("tolerance")) {
    if (!doc.at("tolerance").is_number()) throw parse_error("'tolerance' must be a number");
    cfg.tolerance = doc.at("tolerance").get<double>();
  }
  if (doc.contains("samples")) cfg.samples = detail::int_field(doc.at("samples"), "samples");
  return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

// ---------------------------------------------------------------------------
// Commands

namespace detail {

inline void require_problem(const RunConfig& cfg) {
  if (!cfg.initial) throw parse_error("config needs 'initial'");
  if (!cfg.coefficients) throw parse_error("config needs 'coefficients'");
}

}  // namespace detail

/// Rows m, x, status, step, cause; a singular run ends with one row for the
/// index that could not be formed.
inline std::vector<Record> cmd_iterate(const RunConfig& cfg) {
  detail::require_problem(cfg);
  if (!cfg.horizon) throw parse_error("iterate needs 'horizon'");
  std::int64_t horizon = *cfg.horizon;
  if (horizon < 0) throw parse_error("'horizon' must be nonnegative");
  if (horizon > 0 && !cfg.coefficients->covers(horizon - 1))
    throw parse_error("'horizon' exceeds the coefficient list");

  Trajectory traj = iterate(*cfg.initial, *cfg.coefficients, horizon);
  std::vector<Record> rows;
  for (std::int64_t m = traj.first_index(); m <= traj.last_index(); ++m)
    rows.push_back({{"m", m}, {"x", traj.at(m).str()}, {"status", std::string("regular")}, {"step", {}}, {"cause", {}}});
  if (const auto& s = traj.singular())
    rows.push_back({{"m", s->step + 1},
                    {"x", {}},
                    {"status", std::string("singular")},
                    {"step", s->step},
                    {"cause", std::string(to_string(s->cause))}});
  return rows;
}

/// {m, value, branch}; branch names the constant-coefficient formula used,
/// or "general" for non-constant streams.
inline Record cmd_closed(const RunConfig& cfg) {
  detail::require_problem(cfg);
  if (!cfg.index) throw parse_error("closed needs 'index'");
  std::int64_t m = *cfg.index;
  if (m < first_x_index) throw parse_error("'index' must be >= -3");
  const auto& coeffs = *cfg.coefficients;
  if (m >= 1 && !coeffs.covers(m - 1)) throw parse_error("'index' exceeds the coefficient list");

  ExactRational value;
  std::string branch = "general";
  if (coeffs.kind() == CoefficientStream::Kind::constant) {
    const auto& c = coeffs.payload().front();
    branch = branch_tag(constant_branch(c.a));
    value = x_closed_constant(*cfg.initial, c.a, c.b, m);
  } else {
    value = x_closed(*cfg.initial, coeffs, m);
  }
  return {{"m", m}, {"value", value.str()}, {"branch", branch}};
}

inline VerifyOptions verify_options(const RunConfig& cfg) {
  VerifyOptions opt;
  if (cfg.trials) opt.trials = *cfg.trials;
  if (cfg.horizon) opt.horizon = *cfg.horizon;
  if (cfg.seed) opt.seed = *cfg.seed;
  if (cfg.tolerance) opt.tolerance = *cfg.tolerance;
  if (cfg.samples) opt.samples = *cfg.samples;
  if (opt.trials < 0) throw parse_error("'trials' must be nonnegative");
  if (opt.horizon < 0) throw parse_error("'horizon' must be nonnegative");
  if (opt.samples < 0) throw parse_error("'samples' must be nonnegative");
  return opt;
}

inline Record verify_record(const VerifyReport& r, const VerifyOptions& opt) {
  Record rec{{"trials", r.trials},
             {"skipped", r.skipped},
             {"checked", r.checked},
             {"max_symmetry_residual", r.max_symmetry_residual},
             {"tolerance", opt.tolerance},
             {"all_exact_match", r.all_exact_match},
             {"pass", r.passed()}};
  auto add = [&](const char* name, FieldValue v) { rec.push_back({name, std::move(v)}); };
  if (r.witness) {
    add("witness_trial", static_cast<std::int64_t>(r.witness->trial));
    add("witness_initial", r.witness->ic.describe());
    add("witness_stream", r.witness->coeffs.describe());
    add("witness_index", r.witness->index);
    add("witness_expected", r.witness->expected);
    add("witness_got", r.witness->got);
  } else {
    for (const char* name : {"witness_trial", "witness_initial", "witness_stream", "witness_index", "witness_expected",
                             "witness_got"})
      add(name, {});
  }
  return rec;
}

inline std::vector<Record> symmetry_records(const std::vector<SymmetryRow>& rows) {
  std::vector<Record> out;
  for (const auto& r : rows)
    out.push_back({{"characteristic", r.characteristic},
                   {"samples", r.samples},
                   {"max_residual", r.max_residual},
                   {"threshold", r.threshold},
                   {"expect", std::string(r.expect_zero ? "zero" : "nonzero")},
                   {"pass", r.pass()}});
  return out;
}

inline constexpr std::uint64_t default_symmetry_seed = 1;

// ---------------------------------------------------------------------------
// Entry point

/*
 * ratseq --mode {iterate,closed,verify,symmetry} [--config PATH] [--index M]
 *        [--horizon N] [--output {csv,jsonl}] [--trials K] [--seed S]
 *        [--tolerance T] [--samples N] [--out FILE] [--inject-fault]
 *
 * Flags override values from the config file.
 */
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact iteration, closed forms and verification for x_{n+1} = x_{n-3}x_n / (x_{n-2}(a_n + b_n x_{n-3}x_n))"};
  std::string mode;
  std::string config_path;
  std::string output = "csv";
  std::string out_path;
  std::optional<std::int64_t> index, horizon, trials, samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  bool inject_fault = false;

  app.add_option("--mode", mode, "Workflow to run")->required()->check(CLI::IsMember({"iterate", "closed", "verify", "symmetry"}));
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--index", index, "x-index m for closed mode");
  app.add_option("--horizon", horizon, "Last x-index to compute");
  app.add_option("--output", output, "Output format")->check(CLI::IsMember({"csv", "jsonl"}));
  app.add_option("--trials", trials, "Randomized verification trials");
  app.add_option("--seed", seed, "Seed for randomized verification");
  app.add_option("--tolerance", tolerance, "Residual tolerance");
  app.add_option("--samples", samples, "Symmetry sweep sample count");
  app.add_option("--out", out_path, "Write records to FILE instead of stdout");
  app.add_flag("--inject-fault", inject_fault, "Verify a deliberately wrong closed form (negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_config_error;
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      err << "error: cannot open output file '" << out_path << "'\n";
      return exit_config_error;
    }
  }
  std::ostream& sink = out_path.empty() ? out : file;
  OutputFormat fmt = output == "jsonl" ? OutputFormat::jsonl : OutputFormat::csv;

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (index) cfg.index = index;
    if (horizon) cfg.horizon = horizon;
    if (trials) cfg.trials = trials;
    if (seed) cfg.seed = seed;
    if (tolerance) cfg.tolerance = tolerance;
    if (samples) cfg.samples = samples;

    if (mode == "iterate") {
      write_records(sink, cmd_iterate(cfg), fmt);
      return exit_ok;
    }
    if (mode == "closed") {
      write_records(sink, {cmd_closed(cfg)}, fmt);
      return exit_ok;
    }
    if (mode == "verify") {
      VerifyOptions opt = verify_options(cfg);
      opt.inject_fault = inject_fault;
      VerifyReport report = run_verify(opt);
      write_records(sink, {verify_record(report, opt)}, fmt);
      if (report.witness) {
        const auto& w = *report.witness;
        err << "verification failed: trial " << w.trial << ", seeds (" << w.ic.describe() << "), stream "
            << w.coeffs.describe() << ", index " << w.index << ": expected " << w.expected << ", got " << w.got
            << "\n";
      }
      return report.passed() ? exit_ok : exit_verification_failure;
    }
    // symmetry
    VerifyOptions opt = verify_options(cfg);
    auto rows = symmetry_sweep(cfg.seed.value_or(default_symmetry_seed), opt.samples, opt.tolerance);
    write_records(sink, symmetry_records(rows), fmt);
    bool ok = true;
    for (const auto& r : rows) ok = ok && r.pass();
    return ok ? exit_ok : exit_verification_failure;
  } catch (const parse_error& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const index_out_of_range& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const domain_error& e) {
    err << "domain error: " << e.what() << "\n";
    return exit_domain_error;
  }
}

}  // namespace ratseq::cli
