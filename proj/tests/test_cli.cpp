#include <gtest/gtest.h>

#include "cli_harness.hpp"

namespace ratseq {
namespace {

using testing::csv_as_json;
using testing::jsonl_as_json;
using testing::run_cli;
using testing::write_temp_config;

const char* kUnitConfig = R"({
  "initial": {"x_m3": "1", "x_m2": "1", "x_m1": "1", "x_0": "1"},
  "coefficients": {"kind": "constant", "a": "1", "b": "1"},
  "horizon": 3
})";

TEST(ConfigParsing, AcceptsDocumentedSchema) {
  auto cfg = cli::parse_config_text(R"({
    "initial": {"x_m3": "-3/7", "x_m2": "2", "x_m1": "1/2", "x_0": "5"},
    "coefficients": {"kind": "periodic", "pairs": [["1", "0"], ["2", "1/3"]]},
    "horizon": 12, "index": 4, "trials": 7, "seed": 9, "tolerance": 1e-8, "samples": 30
  })");
  ASSERT_TRUE(cfg.initial);
  EXPECT_EQ(cfg.initial->x_m3, ExactRational(-3, 7));
  ASSERT_TRUE(cfg.coefficients);
  EXPECT_EQ(cfg.coefficients->kind(), CoefficientStream::Kind::periodic);
  EXPECT_EQ(cfg.coefficients->at(3).b, ExactRational(1, 3));
  EXPECT_EQ(cfg.horizon, 12);
  EXPECT_EQ(cfg.index, 4);
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.tolerance, 1e-8);
}

TEST(ConfigParsing, RejectsUnknownKeysAndBadValues) {
  const char* bad[] = {
      R"({"horizon": 3, "extra": 1})",
      R"({"initial": {"x_m3": "1", "x_m2": "1", "x_m1": "1", "x_0": "1", "x_1": "1"}})",
      R"({"initial": {"x_m3": "1", "x_m2": "1", "x_m1": "1"}})",
      R"({"initial": {"x_m3": 1, "x_m2": "1", "x_m1": "1", "x_0": "1"}})",
      R"({"initial": {"x_m3": "0.5", "x_m2": "1", "x_m1": "1", "x_0": "1"}})",
      R"({"coefficients": {"kind": "constant", "a": "1"}})",
      R"({"coefficients": {"kind": "constant", "a": "1", "b": "1", "pairs": []}})",
      R"({"coefficients": {"kind": "periodic", "pairs": []}})",
      R"({"coefficients": {"kind": "list", "pairs": [["1"]]}})",
      R"({"coefficients": {"kind": "spline"}})",
      R"({"horizon": "3"})",
      R"([1, 2])",
      R"({not json)",
  };
  for (const char* text : bad) EXPECT_THROW(cli::parse_config_text(text), parse_error) << text;
}

TEST(CmdIterate, UnitCaseRows) {
  auto path = write_temp_config("iterate_unit", kUnitConfig);
  auto r = run_cli({"--mode", "iterate", "--config", path, "--output", "jsonl"});
  ASSERT_EQ(r.status, 0) << r.err;
  auto rows = jsonl_as_json(r.out);
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows.front()["m"], -3);
  EXPECT_EQ(rows.back()["m"], 3);
  EXPECT_EQ(rows.back()["x"], "1/4");
  EXPECT_EQ(rows.back()["status"], "regular");
}

TEST(CmdIterate, HorizonZeroGivesSeedsOnly) {
  auto path = write_temp_config("iterate_unit0", kUnitConfig);
  auto r = run_cli({"--mode", "iterate", "--config", path, "--horizon", "0", "--output", "jsonl"});
  ASSERT_EQ(r.status, 0);
  auto rows = jsonl_as_json(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows.back()["m"], 0);
}

TEST(CmdIterate, SingularRow) {
  auto path = write_temp_config("iterate_singular", R"({
    "initial": {"x_m3": "1", "x_m2": "0", "x_m1": "1", "x_0": "1"},
    "coefficients": {"kind": "constant", "a": "2", "b": "5"}, "horizon": 10})");
  auto r = run_cli({"--mode", "iterate", "--config", path, "--output", "jsonl"});
  ASSERT_EQ(r.status, 0);
  auto rows = jsonl_as_json(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows.back()["status"], "singular");
  EXPECT_EQ(rows.back()["step"], 0);
  EXPECT_EQ(rows.back()["cause"], "zero-x-factor");
  EXPECT_TRUE(rows.back()["x"].is_null());
}

TEST(CmdIterate, ConfigErrorsExitTwo) {
  EXPECT_EQ(run_cli({"--mode", "iterate"}).status, 2);
  EXPECT_EQ(run_cli({"--mode", "iterate", "--config", "/nonexistent/ratseq.json"}).status, 2);
  EXPECT_EQ(run_cli({"--mode", "walk"}).status, 2);
  EXPECT_EQ(run_cli({}).status, 2);
  auto path = write_temp_config("iterate_bad", R"({"initial": {"x_m3": "1/0", "x_m2": "1", "x_m1": "1", "x_0": "1"},
    "coefficients": {"kind": "constant", "a": "1", "b": "1"}, "horizon": 3})");
  EXPECT_EQ(run_cli({"--mode", "iterate", "--config", path}).status, 2);
  auto list = write_temp_config("iterate_list", R"({"initial": {"x_m3": "1", "x_m2": "1", "x_m1": "1", "x_0": "1"},
    "coefficients": {"kind": "list", "pairs": [["1","1"],["1","1"]]}, "horizon": 3})");
  EXPECT_EQ(run_cli({"--mode", "iterate", "--config", list}).status, 2);
  EXPECT_EQ(run_cli({"--mode", "iterate", "--config", list, "--horizon", "2"}).status, 0);
}

TEST(CmdClosed, Branches) {
  auto unit = write_temp_config("closed_unit", kUnitConfig);
  auto r = run_cli({"--mode", "closed", "--config", unit, "--index", "3", "--output", "jsonl"});
  ASSERT_EQ(r.status, 0) << r.err;
  auto rec = jsonl_as_json(r.out).at(0);
  EXPECT_EQ(rec["m"], 3);
  EXPECT_EQ(rec["value"], "1/4");
  EXPECT_EQ(rec["branch"], "a1");

  auto neg = write_temp_config("closed_neg", R"({"initial": {"x_m3": "1", "x_m2": "1", "x_m1": "1", "x_0": "1"},
    "coefficients": {"kind": "constant", "a": "-1", "b": "3"}, "index": 4})");
  rec = jsonl_as_json(run_cli({"--mode", "closed", "--config", neg, "--output", "jsonl"}).out).at(0);
  EXPECT_EQ(rec["value"], "2");
  EXPECT_EQ(rec["branch"], "aneg1");

  auto geo = write_temp_config("closed_geo", R"({"initial": {"x_m3": "1", "x_m2": "1", "x_m1": "1", "x_0": "1"},
    "coefficients": {"kind": "constant", "a": "2", "b": "0"}})");
  rec = jsonl_as_json(run_cli({"--mode", "closed", "--config", geo, "--index", "3", "--output", "jsonl"}).out).at(0);
  EXPECT_EQ(rec["value"], "1/8");
  EXPECT_EQ(rec["branch"], "aneq1");

  auto per = write_temp_config("closed_per", R"({"initial": {"x_m3": "2", "x_m2": "-5/3", "x_m1": "1", "x_0": "4"},
    "coefficients": {"kind": "periodic", "pairs": [["1","2"],["3","-1"]]}})");
  rec = jsonl_as_json(run_cli({"--mode", "closed", "--config", per, "--index", "-2", "--output", "jsonl"}).out).at(0);
  EXPECT_EQ(rec["m"], -2);
  EXPECT_EQ(rec["value"], "-5/3");
  EXPECT_EQ(rec["branch"], "general");
}

TEST(CmdClosed, DomainAndConfigErrors) {
  auto zero = write_temp_config("closed_zero", R"({"initial": {"x_m3": "0", "x_m2": "1", "x_m1": "1", "x_0": "1"},
    "coefficients": {"kind": "constant", "a": "1", "b": "1"}})");
  auto r = run_cli({"--mode", "closed", "--config", zero, "--index", "5"});
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.err.find("domain error"), std::string::npos);

  auto pole = write_temp_config("closed_pole", R"({"initial": {"x_m3": "1", "x_m2": "1", "x_m1": "1", "x_0": "1"},
    "coefficients": {"kind": "constant", "a": "-1", "b": "1"}})");
  EXPECT_EQ(run_cli({"--mode", "closed", "--config", pole, "--index", "5"}).status, 3);

  auto unit = write_temp_config("closed_unit2", kUnitConfig);
  EXPECT_EQ(run_cli({"--mode", "closed", "--config", unit}).status, 2);
  EXPECT_EQ(run_cli({"--mode", "closed", "--config", unit, "--index", "-4"}).status, 2);
}

TEST(CmdVerify, SmallRunPasses) {
  auto r = run_cli({"--mode", "verify", "--trials", "9", "--horizon", "40", "--samples", "50", "--output", "jsonl"});
  ASSERT_EQ(r.status, 0) << r.err;
  auto rec = jsonl_as_json(r.out).at(0);
  EXPECT_EQ(rec["trials"], 9);
  EXPECT_EQ(rec["all_exact_match"], true);
  EXPECT_EQ(rec["pass"], true);
  EXPECT_TRUE(rec["witness_index"].is_null());
  EXPECT_LE(rec["max_symmetry_residual"].get<double>(), 1e-10);
}

TEST(CmdVerify, ZeroTrialsIsEmptySuccess) {
  auto r = run_cli({"--mode", "verify", "--trials", "0", "--output", "jsonl"});
  ASSERT_EQ(r.status, 0);
  auto rec = jsonl_as_json(r.out).at(0);
  EXPECT_EQ(rec["trials"], 0);
  EXPECT_EQ(rec["skipped"], 0);
  EXPECT_EQ(rec["checked"], 0);
}

TEST(CmdVerify, InjectedFaultExitsOneWithWitness) {
  auto r = run_cli({"--mode", "verify", "--trials", "5", "--horizon", "30", "--inject-fault", "--output", "jsonl"});
  EXPECT_EQ(r.status, 1);
  auto rec = jsonl_as_json(r.out).at(0);
  EXPECT_EQ(rec["all_exact_match"], false);
  EXPECT_FALSE(rec["witness_index"].is_null());
  // residue classes j = 0..2 first differ at block 1, i.e. m = 3
  EXPECT_EQ(rec["witness_index"], 3);
  EXPECT_NE(r.err.find("verification failed"), std::string::npos);
}

TEST(CmdVerify, DeterministicForSeed) {
  auto a = run_cli({"--mode", "verify", "--trials", "6", "--horizon", "25", "--seed", "4"});
  auto b = run_cli({"--mode", "verify", "--trials", "6", "--horizon", "25", "--seed", "4"});
  EXPECT_EQ(a.out, b.out);
}

TEST(CmdSymmetry, DefaultSweep) {
  auto r = run_cli({"--mode", "symmetry", "--output", "jsonl"});
  ASSERT_EQ(r.status, 0);
  auto rows = jsonl_as_json(r.out);
  ASSERT_EQ(rows.size(), 4u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LE(rows[i]["max_residual"].get<double>(), 1e-10);
    EXPECT_EQ(rows[i]["samples"], 500);
  }
  EXPECT_GE(rows[3]["max_residual"].get<double>(), 1e-3);
  EXPECT_EQ(rows[3]["expect"], "nonzero");
}

TEST(CmdSymmetry, SampleCountAndToleranceOverride) {
  auto r = run_cli({"--mode", "symmetry", "--samples", "10", "--output", "jsonl"});
  ASSERT_EQ(jsonl_as_json(r.out).size(), 4u);

  auto strict = run_cli({"--mode", "symmetry", "--samples", "10", "--tolerance", "-1", "--output", "jsonl"});
  auto rows = jsonl_as_json(strict.out);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(rows[i]["threshold"], -1.0);
    EXPECT_EQ(rows[i]["pass"], false);
  }
  EXPECT_EQ(rows[3]["pass"], true);
  EXPECT_EQ(strict.status, 1);
}

TEST(Output, CsvAndJsonlCarryTheSameFields) {
  auto unit = write_temp_config("fmt_unit", R"({
    "initial": {"x_m3": "1", "x_m2": "1", "x_m1": "1", "x_0": "-1"},
    "coefficients": {"kind": "constant", "a": "1", "b": "1"}, "horizon": 3})");
  auto per = write_temp_config("fmt_per", R"({
    "initial": {"x_m3": "2", "x_m2": "-5/3", "x_m1": "1", "x_0": "4"},
    "coefficients": {"kind": "periodic", "pairs": [["1","2"],["3","-1"]]}, "horizon": 20, "index": 17})");
  std::vector<std::vector<std::string>> runs = {
      {"--mode", "iterate", "--config", unit},
      {"--mode", "iterate", "--config", per},
      {"--mode", "closed", "--config", per},
      {"--mode", "verify", "--trials", "4", "--horizon", "20", "--samples", "20"},
      {"--mode", "verify", "--trials", "4", "--horizon", "20", "--samples", "20", "--inject-fault"},
      {"--mode", "symmetry", "--samples", "25"},
  };
  for (auto args : runs) {
    auto csv_args = args;
    csv_args.insert(csv_args.end(), {"--output", "csv"});
    auto jsonl_args = args;
    jsonl_args.insert(jsonl_args.end(), {"--output", "jsonl"});
    auto csv = run_cli(csv_args);
    auto jsonl = run_cli(jsonl_args);
    EXPECT_EQ(csv.status, jsonl.status);
    auto a = csv_as_json(csv.out);
    auto b = jsonl_as_json(jsonl.out);
    ASSERT_EQ(a.size(), b.size()) << args[1];
    ASSERT_FALSE(a.empty());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]) << args[1] << " row " << i;
  }
}

TEST(Output, CsvQuotesRationals) {
  auto unit = write_temp_config("csv_unit", kUnitConfig);
  auto r = run_cli({"--mode", "iterate", "--config", unit});
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "m,x,status,step,cause");
  EXPECT_NE(r.out.find("3,\"1/4\",\"regular\",,"), std::string::npos);
}

TEST(Output, WritesToFile) {
  auto unit = write_temp_config("file_unit", kUnitConfig);
  auto target = std::filesystem::temp_directory_path() / "ratseq_test_out.csv";
  auto r = run_cli({"--mode", "iterate", "--config", unit, "--out", target.string()});
  ASSERT_EQ(r.status, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(target);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_NE(ss.str().find("\"1/4\""), std::string::npos);
}

}  // namespace
}  // namespace ratseq
