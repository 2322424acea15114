#pragma once

// Batch configuration: one JSON document describing the generator, the
// signal, the grid, the experiments to run and their tolerances.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "maxregkit/funcalc.hpp"
#include "maxregkit/maxreg.hpp"
#include "maxregkit/semigroup.hpp"
#include "maxregkit/signal.hpp"

namespace maxregkit::app {

/// Malformed or inconsistent configuration. The CLI maps it to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GeneratorSpec {
  std::string preset = "scalar";  ///< laplacian_1d, random_sectorial, jordan_like, scalar, random_hermitian
  std::optional<std::filesystem::path> file;
  std::size_t n = 4;
  std::optional<std::uint64_t> seed;
  double angle = 1.0;
  double coupling = 1.0;
  Complex lambda{1.0};
};

struct SignalSpec {
  std::string preset = "gauss_bump";
  std::optional<std::filesystem::path> file;
  SignalParams params;
  std::optional<std::uint64_t> seed;
};

struct FunctionSpec {
  std::string kind = "const_one";  ///< const_one, resolvent_frac, exp_scale, halfplane_indicator, rational
  double sigma = 1.0;
  Sign sign = Sign::plus;
  double t = 1.0;
  HalfPlane side = HalfPlane::re_positive;
  double shift = 0.0;
  std::vector<Complex> numerator;
  std::vector<Complex> denominator;
};

struct Tolerances {
  double commutator = 5e-3;
  double norm_equality = 5e-3;
  double desimon = 5e-3;
  double adjoint = 5e-3;
  double residual = 1e-2;
  double consistency = 1e-9;
  double funcalc = 1e-9;
  double extended_commutator = 5e-3;
  double path_agreement = 1e-2;
  double order = 1.5;
};

inline const std::vector<std::string>& known_experiments() {
  static const std::vector<std::string> names = {
      "commutator", "norm_equality", "desimon",    "adjoint",
      "residuals",  "funcalc",       "extended_commutator"};
  return names;
}

struct RunConfig {
  GeneratorSpec generator;
  SignalSpec signal;
  std::optional<double> horizon;
  std::size_t samples = 2048;
  std::vector<std::string> experiments;
  std::vector<Path> paths = {Path::direct};
  std::optional<std::filesystem::path> output_path;
  std::string format = "json";
  Tolerances tolerances;
  FunctionSpec b1;
  FunctionSpec b2;
  std::vector<std::size_t> sweep_samples = {512, 1024, 2048};
  std::vector<std::size_t> bench_samples = {512, 2048, 8192};
  std::vector<std::size_t> bench_dims = {4};
  std::uint64_t seed = 0;
};

/// Parses a configuration document. Relative file paths are resolved against
/// `base_dir`. Throws ConfigError naming the line or the offending field.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Forces every seed in the configuration: generator seed s, signal seed s + 1.
void override_seed(RunConfig& config, std::uint64_t seed);

std::uint64_t generator_seed(const RunConfig& config);
std::uint64_t signal_seed(const RunConfig& config);

/// Generator described by the spec; `dim` replaces the preset size when given.
/// Validation failures propagate as ValidationError.
Generator build_generator(const GeneratorSpec& spec, std::uint64_t seed,
                          std::optional<std::size_t> dim = std::nullopt);

/// Default horizon when the config omits T: preset support plus 20 / alpha.
double default_horizon(const RunConfig& config, const Generator& g);

Signal build_signal(const SignalSpec& spec, const Grid& grid, std::size_t dim, std::uint64_t seed);

HoloFunction build_function(const FunctionSpec& spec);

/// Effective configuration as JSON, echoed into reports.
nlohmann::ordered_json config_echo(const RunConfig& config);

}  // namespace maxregkit::app
