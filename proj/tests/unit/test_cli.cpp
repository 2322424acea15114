#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

#include "json.hpp"
#include "maxregkit/errors.hpp"
#include "maxregkit_app/config.hpp"
#include "maxregkit_app/driver.hpp"
#include "maxregkit_app/presets.hpp"

using namespace maxregkit;
namespace fs = std::filesystem;

namespace {

std::string message_of(const std::string& text) {
  try {
    app::parse_config(text);
  } catch (const app::ConfigError& e) {
    return e.what();
  }
  return {};
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "maxregkit_cli_test";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch_dir() / name;
  std::ofstream(p) << text;
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MAXREGKIT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json strip_volatile(nlohmann::json doc) {
  doc.erase("timestamp");
  for (auto& row : doc["rows"]) row.erase("wall_time_s");
  return doc;
}

}  // namespace

TEST(Presets, LaplacianEigenvalues) {
  const auto eig = eig_hermitian(app::laplacian_1d(3));
  for (int k = 1; k <= 3; ++k) {
    EXPECT_NEAR(eig.eigenvalues[k - 1].real(), 16.0 * (2.0 - 2.0 * std::cos(k * std::numbers::pi / 4.0)), 1e-12);
  }
}

TEST(Presets, JordanLike) {
  EXPECT_EQ(app::jordan_like(2, 10.0), (CMatrix{{1.0, 10.0}, {0.0, 1.0}}));
}

TEST(Presets, RandomSectorialIsDeterministicAndWithinSector) {
  EXPECT_EQ(app::random_sectorial(4, 9, 1.0), app::random_sectorial(4, 9, 1.0));
  EXPECT_NE(app::random_sectorial(4, 9, 1.0), app::random_sectorial(4, 10, 1.0));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Generator g = make_generator(app::random_sectorial(5, seed, 0.9));
    for (const auto& l : g.spectrum()) {
      EXPECT_GE(l.real(), 0.5 - 1e-9);
      EXPECT_LE(l.real(), 4.0 + 1e-9);
      EXPECT_LE(std::abs(std::arg(l)), 0.9 + 1e-9);
    }
  }
  EXPECT_THROW(app::random_sectorial(2, 0, 2.0), ArgumentError);
}

TEST(Presets, RandomHermitian) {
  const Generator g = make_generator(app::random_hermitian(6, 2));
  EXPECT_TRUE(g.is_selfadjoint());
  EXPECT_GE(g.alpha(), 0.5 - 1e-12);
}

TEST(Config, MinimalDefaults) {
  const auto c = app::parse_config(R"({"generator": {"preset": "scalar"}})");
  EXPECT_EQ(c.samples, 2048u);
  EXPECT_TRUE(c.experiments.empty());
  EXPECT_EQ(c.format, "json");
  EXPECT_EQ(c.tolerances.commutator, 5e-3);
  EXPECT_FALSE(c.horizon.has_value());
}

TEST(Config, FullDocument) {
  const auto c = app::parse_config(R"({
    "seed": 4,
    "generator": {"preset": "random_sectorial", "n": 3, "angle": 0.7},
    "signal": {"preset": "randsmooth", "modes": 6},
    "grid": {"T": 12.5, "N": 1024},
    "experiments": ["commutator", "funcalc"],
    "paths": "both",
    "output": {"format": "csv"},
    "tolerances": {"commutator": 1e-2},
    "funcalc": {"b1": {"num": [[1, 0]], "den": [[2, 0], [1, 0]]}, "b2": {"kind": "exp_scale", "t": 0.3}},
    "sweep": {"N": [256, 512]}
  })");
  EXPECT_EQ(c.generator.n, 3u);
  EXPECT_EQ(app::generator_seed(c), 4u);
  EXPECT_EQ(app::signal_seed(c), 5u);
  EXPECT_EQ(c.paths.size(), 2u);
  EXPECT_EQ(*c.horizon, 12.5);
  EXPECT_EQ(c.tolerances.commutator, 1e-2);
  EXPECT_EQ(c.b1.kind, "rational");
  EXPECT_EQ(c.b1.denominator.size(), 2u);
  EXPECT_EQ(c.b2.t, 0.3);
  EXPECT_EQ(c.sweep_samples, (std::vector<std::size_t>{256, 512}));
}

TEST(Config, Diagnostics) {
  EXPECT_NE(message_of("{\n  \"generator\": {\n    \"preset\": \"scalar\",\n  }\n}").find("line 4"),
            std::string::npos);
  EXPECT_NE(message_of(R"({"generator": {"preset": "scalar"}, "grid": {"N": 1000}})").find("'grid.N'"),
            std::string::npos);
  EXPECT_NE(message_of(R"({"generator": {"preset": "nope"}})").find("'generator.preset'"), std::string::npos);
  EXPECT_NE(message_of(R"({"generator": {"preset": "scalar"}, "experiments": ["commutator", "x"]})")
                .find("'experiments[1]'"),
            std::string::npos);
  EXPECT_NE(message_of(R"({"generator": {"preset": "scalar"}, "colour": 1})").find("'colour'"),
            std::string::npos);
  EXPECT_NE(message_of(R"({"generator": {"preset": "random_sectorial", "angle": 1.6}})").find("angle"),
            std::string::npos);
  EXPECT_NE(message_of(R"({"signal": {}})").find("'generator'"), std::string::npos);
  EXPECT_NE(message_of(R"({"generator": {"preset": "scalar"}, "funcalc": {"b1": {"num": [[1, 0]]}}})")
                .find("'funcalc.b1'"),
            std::string::npos);
}

TEST(Driver, EmptyExperimentListGivesEmptyPassingReport) {
  const auto report = app::run(app::parse_config(R"({"generator": {"preset": "scalar"}})"));
  EXPECT_TRUE(report.rows.empty());
  EXPECT_EQ(report.exit_code(), 0);
}

TEST(Driver, ScalarCommutatorPasses) {
  const auto report = app::run(app::parse_config(R"({
    "generator": {"preset": "scalar", "lambda": 1},
    "signal": {"preset": "gauss_bump", "t0": 10, "width": 1},
    "grid": {"T": 40, "N": 2048},
    "experiments": ["commutator"]
  })"));
  ASSERT_EQ(report.rows.size(), 1u);
  EXPECT_LE(report.rows[0].value, 1e-3);
  EXPECT_TRUE(report.rows[0].pass);
  EXPECT_EQ(report.exit_code(), 0);
}

TEST(Driver, JordanNormEqualityFails) {
  const auto report = app::run(app::parse_config(R"({
    "generator": {"preset": "jordan_like", "n": 2, "coupling": 10},
    "signal": {"preset": "gauss_bump", "direction": [0, 1]},
    "grid": {"T": 20, "N": 2048},
    "experiments": ["norm_equality"],
    "tolerances": {"norm_equality": 5e-3}
  })"));
  ASSERT_EQ(report.rows.size(), 1u);
  EXPECT_FALSE(report.rows[0].pass);
  EXPECT_GE(report.rows[0].value, 0.05);
  EXPECT_EQ(report.exit_code(), 1);
}

TEST(Driver, ExperimentErrorsBecomeRows) {
  const auto report = app::run(app::parse_config(R"({
    "generator": {"preset": "scalar"},
    "grid": {"N": 256},
    "experiments": ["funcalc", "residuals"],
    "funcalc": {"b1": {"num": [[1, 0]], "den": [[-1, 0], [1, 0]]}}
  })"));
  ASSERT_GE(report.rows.size(), 2u);
  EXPECT_FALSE(report.rows[0].error.empty());
  EXPECT_TRUE(report.rows[0].validation_error);
  EXPECT_TRUE(report.rows[1].error.empty());
  EXPECT_EQ(report.exit_code(), 3);
}

TEST(Driver, FittedOrder) {
  EXPECT_NEAR(app::fitted_order({512, 1024, 2048}, {4.0, 1.0, 0.25}), 2.0, 1e-12);
  EXPECT_TRUE(std::isnan(app::fitted_order({512}, {1.0})));
}

TEST(Driver, SweepAddsOrderRows) {
  const auto report = app::sweep(app::parse_config(R"({
    "generator": {"preset": "random_sectorial", "n": 2, "seed": 1, "angle": 0.8},
    "signal": {"preset": "gauss_bump"},
    "experiments": ["residuals"],
    "sweep": {"N": [256, 512, 1024]}
  })"));
  int orders = 0;
  for (const auto& r : report.rows) {
    if (r.op == "ode_forward_order" || r.op == "ode_backward_order") {
      ++orders;
      EXPECT_GE(r.value, 1.8);
    }
  }
  EXPECT_EQ(orders, 2);
}

TEST(Driver, SingleNSweepDegeneratesToRun) {
  const std::string text = R"({
    "generator": {"preset": "scalar"}, "experiments": ["adjoint"],
    "grid": {"N": 512}, "sweep": {"N": [512]}
  })";
  const auto s = app::sweep(app::parse_config(text));
  const auto r = app::run(app::parse_config(text));
  ASSERT_EQ(s.rows.size(), r.rows.size());
  for (std::size_t k = 0; k < s.rows.size(); ++k) EXPECT_EQ(s.rows[k].value, r.rows[k].value);
}

TEST(Driver, SingleCellBench) {
  const auto report = app::bench(app::parse_config(R"({
    "generator": {"preset": "random_sectorial", "seed": 2},
    "bench": {"N": [256], "n": [2]}
  })"));
  int ratio_rows = 0;
  for (const auto& r : report.rows) {
    ratio_rows += r.op == "time_ratio";
    if (r.op == "mreg_forward") EXPECT_TRUE(r.pass);
  }
  EXPECT_EQ(ratio_rows, 1);
}

TEST(Cli, ExitCodes) {
  const auto empty = write_file("empty.json", R"({"generator": {"preset": "scalar"}})");
  EXPECT_EQ(run_cli("run --config " + empty.string()), 0);

  const auto jordan = fs::path(MAXREGKIT_CONFIG_DIR) / "jordan_norm_gap.json";
  EXPECT_EQ(run_cli("run --quiet --config " + jordan.string()), 1);

  const auto broken = write_file("broken.json", "{\"generator\": ");
  EXPECT_EQ(run_cli("run --config " + broken.string()), 2);
  EXPECT_EQ(run_cli("run --config /nonexistent/config.json"), 2);
  EXPECT_EQ(run_cli("run"), 2);
  EXPECT_EQ(run_cli("run --config " + empty.string() + " --format xml"), 2);

  const auto unstable = write_file("unstable.json", R"({
    "generator": {"preset": "scalar", "lambda": -1}, "experiments": ["commutator"]})");
  EXPECT_EQ(run_cli("run --config " + unstable.string()), 3);

  const auto matrix = write_file("rotation.json", R"({"n": 2, "re": [[0, -1], [1, 0]], "im": [[0, 0], [0, 0]]})");
  const auto from_file = write_file("from_file.json", R"({
    "generator": {"file": "rotation.json"}, "experiments": ["desimon"]})");
  EXPECT_EQ(run_cli("run --config " + from_file.string()), 3);
  (void)matrix;
}

TEST(Cli, DeterministicJsonModuloTimestamps) {
  const auto config = write_file("determinism.json", R"({
    "generator": {"preset": "random_sectorial", "n": 2},
    "signal": {"preset": "randsmooth"},
    "grid": {"N": 512},
    "experiments": ["commutator", "adjoint", "funcalc"],
    "paths": "both"
  })");
  const auto a = scratch_dir() / "a.json";
  const auto b = scratch_dir() / "b.json";
  const auto c = scratch_dir() / "c.json";
  ASSERT_NE(run_cli("run --config " + config.string() + " --seed 5 --out " + a.string()), 2);
  ASSERT_NE(run_cli("run --config " + config.string() + " --seed 5 --out " + b.string()), 2);
  ASSERT_NE(run_cli("run --config " + config.string() + " --seed 6 --out " + c.string()), 2);
  const auto ja = strip_volatile(nlohmann::json::parse(slurp(a)));
  const auto jb = strip_volatile(nlohmann::json::parse(slurp(b)));
  const auto jc = strip_volatile(nlohmann::json::parse(slurp(c)));
  EXPECT_EQ(ja.dump(), jb.dump());
  EXPECT_NE(ja.dump(), jc.dump());
  EXPECT_EQ(ja["config"]["generator"]["seed"], 5);
}

TEST(Cli, CsvColumns) {
  const auto config = fs::path(MAXREGKIT_CONFIG_DIR) / "scalar_commutator.json";
  const auto out = scratch_dir() / "scalar.csv";
  EXPECT_EQ(run_cli("run --quiet --config " + config.string() + " --format csv --out " + out.string()), 0);
  std::istringstream lines(slurp(out));
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "experiment,operator,path,N,T,n,alpha,value,tail_bound,wall_time_s,pass");
  std::string row;
  int count = 0;
  while (std::getline(lines, row)) {
    ++count;
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), 10);
  }
  EXPECT_GT(count, 0);
}
