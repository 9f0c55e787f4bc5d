#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "liespin/integrability.hpp"
#include "liespin_cli/commands.hpp"

namespace liespin::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kScenarios = LIESPIN_CLI_SCENARIO_DIR;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("liespin_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& command, const fs::path& file, const Overrides& o = {}) {
    out_.str("");
    err_.str("");
    return run_scenario_command(command, file, o, {dir_, &out_, &err_});
  }

  fs::path write_scenario(const std::string& name, const json& j) {
    const auto path = dir_ / (name + ".json");
    std::ofstream(path) << j.dump();
    return path;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static std::vector<std::vector<double>> read_csv(const fs::path& p, std::string* header = nullptr) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    if (header) *header = line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
      std::vector<double> row;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
      rows.push_back(row);
    }
    return rows;
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST(ScenarioParsing, Spins) {
  EXPECT_EQ(parse_spin("1/2").two_j(), 1);
  EXPECT_EQ(parse_spin("3/2").two_j(), 3);
  EXPECT_EQ(parse_spin("2").two_j(), 4);
  EXPECT_EQ(parse_spin(3).two_j(), 3);
  for (const json bad : {json("2/2"), json("1/3"), json("x"), json(0), json(-1), json(1.5), json("1/2x")}) {
    EXPECT_THROW(parse_spin(bad), ScenarioError) << bad.dump();
  }
  EXPECT_EQ(spin_label(SpinQuantumNumber(1)), "1_2");
  EXPECT_EQ(spin_label(SpinQuantumNumber(4)), "2");
}

TEST(ScenarioParsing, Programs) {
  EXPECT_EQ(parse_program(2.5).value(10.0), 2.5);
  EXPECT_DOUBLE_EQ(parse_program(json{{"type", "linear"}, {"v0", 1.0}, {"slope", 2.0}}).value(3.0), 7.0);
  const auto sine = parse_program(json{{"type", "sinusoid"}, {"amp", 2.0}, {"freq", 1.0}, {"offset", 1.0}});
  EXPECT_DOUBLE_EQ(sine.value(M_PI / 2), 3.0);
  const auto tab = parse_program(json{{"type", "table"}, {"samples", {{0.0, 0.0}, {2.0, 4.0}}}});
  EXPECT_DOUBLE_EQ(tab.value(0.5), 1.0);
  const auto sum = parse_program(json{{"type", "sum"}, {"terms", {1.0, json{{"type", "linear"}, {"slope", 1.0}}}}});
  EXPECT_DOUBLE_EQ(sum.value(2.0), 3.0);
  EXPECT_THROW(parse_program(json{{"type", "cubic"}}), ScenarioError);
  EXPECT_THROW(parse_program(json{{"type", "linear"}, {"slope", 1.0}, {"typo", 2}}), ScenarioError);
  EXPECT_THROW(parse_program("1"), ScenarioError);
}

TEST(ScenarioParsing, Fields) {
  const auto rot = parse_field(json{{"type", "rotating"}, {"B", 1.0}, {"theta", 0.5}, {"omega", 2.0}});
  EXPECT_NEAR(eval_cartesian(rot, 0.0)[0], std::sin(0.5), 1e-15);
  EXPECT_THROW(parse_field(json{{"type", "rotating"}, {"B", -1.0}, {"theta", 0.5}, {"omega", 2.0}}), InvalidArgument);
  EXPECT_THROW(parse_field(json{{"type", "constant"}, {"b", {1.0, 2.0}}}), ScenarioError);
  EXPECT_THROW(parse_field(json{{"type", "polar"}, {"B", 1.0}, {"theta", 1.0}}), ScenarioError);
  const auto tab = parse_field(json{{"type", "table"}, {"samples", {{0, 1, 0, 0}, {1, 0, 1, 0}}}});
  EXPECT_NEAR(eval_cartesian(tab, 0.5)[1], 0.5, 1e-15);
}

TEST(ScenarioParsing, PresetExpandsToRotatingExample) {
  const auto s = parse_scenario(json{{"preset", "rotating-example"}}, "p");
  const auto* rot = std::get_if<RotatingField>(&s.field.kind());
  ASSERT_NE(rot, nullptr);
  EXPECT_EQ(rot->magnitude, 1.0);
  EXPECT_EQ(rot->theta, M_PI / 3.0);
  EXPECT_EQ(rot->omega, 0.5);
  EXPECT_EQ(rot->phi0, 0.0);
  EXPECT_EQ(s.grid, TimeGrid(0.0, 10.0, 100000));
  EXPECT_EQ(s.spins.front().two_j(), 1);
  EXPECT_FALSE(s.gamma.has_value());
  EXPECT_THROW(parse_scenario(json{{"preset", "other"}}, "p"), ScenarioError);
  EXPECT_THROW(parse_scenario(json{{"preset", "rotating-example"}, {"field", {{"type", "constant"}, {"b", {0, 0, 1}}}}}, "p"),
               ScenarioError);
}

TEST(ScenarioParsing, ValidationErrors) {
  const json base{{"preset", "rotating-example"}};
  auto with = [&](const std::string& key, const json& value) {
    json j = base;
    j[key] = value;
    return j;
  };
  EXPECT_THROW(parse_scenario(with("grid", {{"t0", 0}, {"t1", 1}, {"steps", 1}}), "x"), ScenarioError);
  EXPECT_THROW(parse_scenario(with("grid", {{"t0", 1}, {"t1", 1}, {"steps", 10}}), "x"), ScenarioError);
  EXPECT_THROW(parse_scenario(with("initial_state", {1.0, 1.0}), "x"), ScenarioError);
  EXPECT_THROW(parse_scenario(with("initial_state", {1.0, 0.0, 0.0}), "x"), ScenarioError);
  EXPECT_THROW(parse_scenario(with("outputs", {"plot"}), "x"), ScenarioError);
  EXPECT_THROW(parse_scenario(with("gamma", "sometimes"), "x"), ScenarioError);
  EXPECT_THROW(parse_scenario(with("colour", 1), "x"), ScenarioError);
  EXPECT_THROW(parse_scenario(with("name", "../escape"), "x"), ScenarioError);
  EXPECT_THROW(parse_scenario(with("initial_group", {1.0, 0.1, 0.0, 0.0}), "x"), ScenarioError);
  EXPECT_THROW(parse_scenario(with("target", {{"direction", {1.0, 1.0, 0.0}}, {"d", 1.0}}), "x"), ScenarioError);
}

TEST(ScenarioParsing, InitialStateForms) {
  json j{{"preset", "rotating-example"}, {"initial_state", {json::array({0.6, 0.0}), json{{"re", 0.0}, {"im", 0.8}}}}};
  const auto s = parse_scenario(j, "x");
  const auto psi = s.initial_state_for(SpinQuantumNumber(1));
  EXPECT_EQ(psi[0], std::complex<double>(0.6, 0.0));
  EXPECT_EQ(psi[1], std::complex<double>(0.0, 0.8));
}

TEST(ScenarioParsing, Overrides) {
  auto s = parse_scenario(json{{"preset", "rotating-example"}}, "x");
  Overrides o;
  o.steps = 40;
  o.gamma = 1.2;
  o.tolerance = 1e-3;
  apply_overrides(s, o);
  EXPECT_EQ(s.grid.steps(), 40u);
  EXPECT_EQ(*s.gamma, 1.2);
  EXPECT_EQ(*s.tolerances.residual, 1e-3);
  Overrides bad;
  bad.steps = 1;
  EXPECT_THROW(apply_overrides(s, bad), ScenarioError);
}

TEST_F(CliTest, CheckRotatingExample) {
  EXPECT_EQ(run("check", kScenarios / "rotating_example.json"), kSuccess);
  EXPECT_NE(out_.str().find("verdict: integrable"), std::string::npos);
  const auto result = json::parse(slurp(dir_ / "rotating_example.check.json"));
  EXPECT_EQ(result["verdict"], "integrable");
  EXPECT_NEAR(result["gamma"].get<double>(), M_PI / 2, 1e-9);
  EXPECT_NEAR(result["d"]["min"].get<double>(), -0.3660254, 1e-8);
}

TEST_F(CliTest, CheckWrongGammaFails) {
  EXPECT_EQ(run("check", kScenarios / "rotating_wrong_gamma.json"), kFailure);
  EXPECT_NE(out_.str().find("verdict: not_integrable"), std::string::npos);
  EXPECT_NE(out_.str().find("differential"), std::string::npos);
  Overrides loose;
  loose.tolerance = 10.0;
  EXPECT_EQ(run("check", kScenarios / "rotating_wrong_gamma.json", loose), kSuccess);
}

TEST_F(CliTest, InputErrorsExitTwo) {
  EXPECT_EQ(run("check", kScenarios / "missing_field.json"), kInputError);
  EXPECT_NE(err_.str().find("missing 'field'"), std::string::npos);
  EXPECT_EQ(run("check", dir_ / "does_not_exist.json"), kInputError);
  std::ofstream(dir_ / "garbage.json") << "{ not json";
  EXPECT_EQ(run("check", dir_ / "garbage.json"), kInputError);
  EXPECT_EQ(run("frobnicate", kScenarios / "rotating_example.json"), kInputError);
  // A table field that does not cover the grid fails at evaluation time.
  const auto short_table = write_scenario(
      "short", {{"field", {{"type", "table"}, {"samples", {{0, 1, 0, 0}, {1, 0, 1, 0}}}}},
                {"grid", {{"t0", 0}, {"t1", 2}, {"steps", 10}}}});
  EXPECT_EQ(run("check", short_table), kInputError);
}

TEST_F(CliTest, SolveReproducesInitialStateAndIsDeterministic) {
  Overrides o;
  o.steps = 2000;
  ASSERT_EQ(run("solve", kScenarios / "rotating_example.json", o), kSuccess);
  std::string header;
  const auto path = dir_ / "rotating_example.solve.csv";
  const auto rows = read_csv(path, &header);
  EXPECT_EQ(header, "t,re_psi0,im_psi0,re_psi1,im_psi1,Theta,D");
  ASSERT_EQ(rows.size(), 2001u);
  EXPECT_NEAR(rows[0][1], 1.0, 1e-12);
  for (int k = 2; k <= 4; ++k) EXPECT_NEAR(rows[0][k], 0.0, 1e-12);
  EXPECT_EQ(rows[0][5], 0.0);
  EXPECT_NEAR(rows.back()[5], 10.0 * (0.5 - std::sqrt(0.75)), 1e-12);
  const auto first = slurp(path);
  EXPECT_EQ(first.find('\r'), std::string::npos);
  ASSERT_EQ(run("solve", kScenarios / "rotating_example.json", o), kSuccess);
  EXPECT_EQ(slurp(path), first);
}

TEST_F(CliTest, SolveFixedDirectionMatchesDirectExponential) {
  const Eigen::Vector3d b{0.3, -0.4, 0.5};
  const auto file = write_scenario("fixed", {{"spin", "1"},
                                             {"field", {{"type", "constant"}, {"b", {b[0], b[1], b[2]}}}},
                                             {"grid", {{"t0", 0}, {"t1", 5}, {"steps", 50}}}});
  ASSERT_EQ(run("solve", file), kSuccess);
  const auto rows = read_csv(dir_ / "fixed.solve.csv");
  const auto ops = build_spin_operators(SpinQuantumNumber(2));
  StateVector psi0 = StateVector::Zero(3);
  psi0[0] = 1.0;
  for (const auto& row : rows) {
    const StateVector want = exp_hermitian(linear_combination(b, ops), row[0]) * psi0;
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(row[1 + 2 * k], want[k].real(), 1e-8);
      EXPECT_NEAR(row[2 + 2 * k], want[k].imag(), 1e-8);
    }
  }
}

TEST_F(CliTest, SolveNonIntegrableWritesNothing) {
  EXPECT_EQ(run("solve", kScenarios / "not_integrable.json"), kFailure);
  EXPECT_TRUE(fs::is_empty(dir_));
}

TEST_F(CliTest, CompareDefaultsAndCoarseGrid) {
  EXPECT_EQ(run("compare", kScenarios / "rotating_example.json"), kSuccess);
  const auto result = json::parse(slurp(dir_ / "rotating_example.compare.json"));
  EXPECT_LT(result["spins"][0]["state_vs_rk4"]["infidelity"].get<double>(), 1e-6);
  Overrides coarse;
  coarse.steps = 10;
  EXPECT_EQ(run("compare", kScenarios / "rotating_example.json", coarse), kFailure);
  EXPECT_NE(out_.str().find("propagator vs rk4"), std::string::npos);
}

TEST_F(CliTest, CompareSpinSweepPrintsOneBlockPerSpin) {
  EXPECT_EQ(run("compare", kScenarios / "spin_sweep.json"), kSuccess);
  const std::string text = out_.str();
  for (const char* label : {"spin 0.5 (pass", "spin 1 (pass", "spin 1.5 (pass"}) {
    EXPECT_NE(text.find(label), std::string::npos) << label;
  }
  EXPECT_EQ(json::parse(slurp(dir_ / "spin_sweep.compare.json"))["spins"].size(), 3u);
}

TEST_F(CliTest, OracleWritesBothSchemes) {
  Overrides o;
  o.steps = 100;
  ASSERT_EQ(run("oracle", kScenarios / "not_integrable.json", o), kSuccess);
  std::string header;
  const auto rows = read_csv(dir_ / "not_integrable.oracle.csv", &header);
  EXPECT_EQ(header, "t,re_rk4_0,im_rk4_0,re_rk4_1,im_rk4_1,re_mid_0,im_mid_0,re_mid_1,im_mid_1");
  EXPECT_EQ(rows.size(), 101u);
}

TEST_F(CliTest, FsysFollowsConnectingCurve) {
  Overrides o;
  o.steps = 10000;
  ASSERT_EQ(run("fsys", kScenarios / "rotating_example.json", o), kSuccess);
  std::string header;
  const auto rows = read_csv(dir_ / "rotating_example.fsys.csv", &header);
  EXPECT_EQ(header, "t,x1,x2,y1,y2,I_minus_1,distance_to_connecting");
  for (const auto& row : rows) {
    EXPECT_LT(std::abs(row[5]), 1e-10);
    EXPECT_LT(row[6], 1e-6);
  }
  EXPECT_EQ(run("fsys", kScenarios / "not_integrable.json"), kFailure);
}

TEST_F(CliTest, FsysExplicitTarget) {
  const auto file = write_scenario("explicit", {{"preset", "rotating-example"},
                                                {"grid", {{"t0", 0}, {"t1", 2}, {"steps", 200}}},
                                                {"target", {{"direction", {0, 0, 1}}, {"d", 0.25}}},
                                                {"initial_group", {0.0, 1.0, 0.0, 0.0}}});
  ASSERT_EQ(run("fsys", file), kSuccess);
  const auto rows = read_csv(dir_ / "explicit.fsys.csv");
  EXPECT_EQ(rows.front()[2], 1.0);
}

TEST_F(CliTest, BatchWritesPerScenarioFiles) {
  EXPECT_EQ(run("solve", kScenarios / "batch.json"), kSuccess);
  for (const char* name : {"rot.solve.csv", "fixed.solve.csv", "modulated.solve.csv"}) {
    EXPECT_TRUE(fs::exists(dir_ / name)) << name;
  }
  const std::string text = out_.str();
  EXPECT_LT(text.find("== rot =="), text.find("== fixed =="));
  EXPECT_LT(text.find("== fixed =="), text.find("== modulated =="));

  const auto mixed = write_scenario(
      "mixed", {{"scenarios",
                 {json{{"name", "good"}, {"preset", "rotating-example"}, {"grid", {{"t0", 0}, {"t1", 1}, {"steps", 10}}}},
                  json{{"name", "bad"}, {"preset", "rotating-example"}, {"grid", {{"t0", 0}, {"t1", 1}, {"steps", 10}}},
                       {"gamma", 0.3}}}}});
  EXPECT_EQ(run("check", mixed), kFailure);
}

TEST_F(CliTest, OutputsSelectArtifacts) {
  const auto file = write_scenario("quiet", {{"preset", "rotating-example"},
                                             {"grid", {{"t0", 0}, {"t1", 1}, {"steps", 10}}},
                                             {"outputs", {"report"}}});
  ASSERT_EQ(run("check", file), kSuccess);
  EXPECT_TRUE(fs::exists(dir_ / "quiet.check.txt"));
  EXPECT_FALSE(fs::exists(dir_ / "quiet.check.json"));
}

TEST(Selftest, PassesAndDetectsInjectedFault) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_selftest({}, {".", &out, &err}), kSuccess);
  const std::string text = out.str();
  std::size_t groups = 0;
  for (auto pos = text.find("group: "); pos != std::string::npos; pos = text.find("group: ", pos + 1)) ++groups;
  EXPECT_GE(groups, 6u);
  EXPECT_EQ(text.find("FAIL"), std::string::npos);

  std::ostringstream faulty;
  SelftestOptions options;
  options.flip_bracket_sign = true;
  EXPECT_EQ(cmd_selftest(options, {".", &faulty, &err}), kFailure);
  EXPECT_NE(faulty.str().find("FAIL su2: bracket table"), std::string::npos);
}

TEST(Formatting, FullPrecision) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_double(M_PI)), M_PI);
}

}  // namespace
}  // namespace liespin::cli
