#include "maxregkit_app/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "maxregkit/errors.hpp"
#include "maxregkit/fft.hpp"
#include "maxregkit/io.hpp"
#include "maxregkit_app/presets.hpp"

namespace maxregkit::app {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& message) {
  throw ConfigError("config field '" + where + "': " + message);
}

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

// Object with a fixed set of allowed keys.
class Section {
 public:
  Section(const json& node, std::string where, std::set<std::string> allowed)
      : node_(node), where_(std::move(where)) {
    if (!node_.is_object()) fail(where_.empty() ? "<root>" : where_, "must be an object");
    for (const auto& [key, value] : node_.items()) {
      if (!allowed.contains(key)) fail(join(where_, key), "unknown field");
    }
  }

  bool has(const std::string& key) const { return node_.contains(key); }
  const json& at(const std::string& key) const { return node_.at(key); }
  std::string path(const std::string& key) const { return join(where_, key); }

  double real(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number()) fail(path(key), "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path(key), "must be finite");
    return x;
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    if (!has(key)) return fallback;
    return to_count(at(key), path(key));
  }

  std::optional<std::uint64_t> seed(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    const json& v = at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      fail(path(key), "must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_string()) fail(path(key), "must be a string");
    return v.get<std::string>();
  }

  static std::size_t to_count(const json& v, const std::string& where) {
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
      fail(where, "must be a positive integer");
    }
    return v.get<std::size_t>();
  }

 private:
  const json& node_;
  std::string where_;
};

Complex parse_complex(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  fail(where, "must be a number or a [re, im] pair");
}

std::vector<Complex> parse_coefficients(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) fail(where, "must be a non-empty array of [re, im] pairs");
  std::vector<Complex> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(parse_complex(v[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

std::vector<std::size_t> parse_sizes(const json& v, const std::string& where, bool power_of_two) {
  if (!v.is_array() || v.empty()) fail(where, "must be a non-empty array of integers");
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string at = where + "[" + std::to_string(k) + "]";
    const std::size_t x = Section::to_count(v[k], at);
    if (power_of_two && !is_power_of_two(x)) fail(at, "must be a power of two");
    if (!out.empty() && x <= out.back()) fail(at, "values must be strictly ascending");
    out.push_back(x);
  }
  return out;
}

void check_samples(std::size_t n, const std::string& where) {
  if (!is_power_of_two(n) || n < Grid::kMinSamples || n > Grid::kMaxSamples) {
    fail(where, "must be a power of two in [64, 1048576]");
  }
}

Sign parse_sign(const std::string& s, const std::string& where) {
  if (s == "+" || s == "plus") return Sign::plus;
  if (s == "-" || s == "minus") return Sign::minus;
  fail(where, "must be '+' or '-'");
}

HalfPlane parse_side(const std::string& s, const std::string& where) {
  if (s == "re_positive") return HalfPlane::re_positive;
  if (s == "re_negative") return HalfPlane::re_negative;
  fail(where, "must be 're_positive' or 're_negative'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& file) {
  const std::filesystem::path p(file);
  return p.is_absolute() || base.empty() ? p : base / p;
}

GeneratorSpec parse_generator(const json& node, const std::filesystem::path& base) {
  const Section s(node, "generator",
                  {"preset", "file", "n", "seed", "angle", "coupling", "lambda"});
  GeneratorSpec spec;
  if (s.has("file") == s.has("preset")) fail("generator", "give exactly one of 'preset' or 'file'");
  if (s.has("file")) {
    spec.file = resolve(base, s.text("file", ""));
    return spec;
  }
  spec.preset = s.text("preset", spec.preset);
  static const std::set<std::string> presets = {"laplacian_1d", "random_sectorial", "jordan_like",
                                                "scalar", "random_hermitian"};
  if (!presets.contains(spec.preset)) fail(s.path("preset"), "unknown preset '" + spec.preset + "'");
  spec.n = s.count("n", spec.n);
  if (spec.n > 64) fail(s.path("n"), "must be at most 64");
  spec.seed = s.seed("seed");
  spec.angle = s.real("angle", spec.angle);
  if (spec.angle < 0.0 || spec.angle >= std::numbers::pi / 2.0) {
    fail(s.path("angle"), "must lie in [0, pi/2)");
  }
  spec.coupling = s.real("coupling", spec.coupling);
  if (s.has("lambda")) spec.lambda = parse_complex(s.at("lambda"), s.path("lambda"));
  return spec;
}

SignalSpec parse_signal_spec(const json& node, const std::filesystem::path& base) {
  const Section s(node, "signal", {"preset", "file", "seed", "t0", "width", "beta", "modes",
                                   "cutoff_start", "cutoff_end", "direction"});
  SignalSpec spec;
  if (s.has("file") && s.has("preset")) fail("signal", "give at most one of 'preset' or 'file'");
  if (s.has("file")) {
    spec.file = resolve(base, s.text("file", ""));
    return spec;
  }
  spec.preset = s.text("preset", spec.preset);
  if (spec.preset != "gauss_bump" && spec.preset != "exp_decay" && spec.preset != "randsmooth") {
    fail(s.path("preset"), "unknown preset '" + spec.preset + "'");
  }
  spec.seed = s.seed("seed");
  auto& p = spec.params;
  p.t0 = s.real("t0", p.t0);
  p.width = s.real("width", p.width);
  if (p.width <= 0.0) fail(s.path("width"), "must be positive");
  p.beta = s.real("beta", p.beta);
  if (p.beta <= 0.0) fail(s.path("beta"), "must be positive");
  p.modes = s.count("modes", p.modes);
  p.cutoff_start = s.real("cutoff_start", p.cutoff_start);
  p.cutoff_end = s.real("cutoff_end", p.cutoff_end);
  if (!(0.0 <= p.cutoff_start && p.cutoff_start < p.cutoff_end && p.cutoff_end <= 1.0)) {
    fail(s.path("cutoff_end"), "need 0 <= cutoff_start < cutoff_end <= 1");
  }
  if (s.has("direction")) p.direction = parse_coefficients(s.at("direction"), s.path("direction"));
  return spec;
}

FunctionSpec parse_function(const json& node, const std::string& where) {
  const Section s(node, where, {"kind", "sigma", "sign", "t", "side", "shift", "num", "den"});
  FunctionSpec spec;
  const bool rational = s.has("num") || s.has("den");
  spec.kind = s.text("kind", rational ? "rational" : "const_one");
  if (spec.kind == "const_one") {
  } else if (spec.kind == "resolvent_frac") {
    spec.sigma = s.real("sigma", spec.sigma);
    spec.sign = parse_sign(s.text("sign", "+"), s.path("sign"));
  } else if (spec.kind == "exp_scale") {
    spec.t = s.real("t", spec.t);
    if (spec.t < 0.0) fail(s.path("t"), "must be non-negative");
  } else if (spec.kind == "halfplane_indicator") {
    spec.side = parse_side(s.text("side", "re_positive"), s.path("side"));
    spec.shift = s.real("shift", spec.shift);
  } else if (spec.kind == "rational") {
    if (!s.has("num") || !s.has("den")) fail(where, "rational functions need 'num' and 'den'");
    spec.numerator = parse_coefficients(s.at("num"), s.path("num"));
    spec.denominator = parse_coefficients(s.at("den"), s.path("den"));
    if (std::all_of(spec.denominator.begin(), spec.denominator.end(),
                    [](Complex z) { return z == Complex{}; })) {
      fail(s.path("den"), "must not be the zero polynomial");
    }
  } else {
    fail(s.path("kind"), "unknown function '" + spec.kind + "'");
  }
  return spec;
}

Tolerances parse_tolerances(const json& node) {
  const Section s(node, "tolerances",
                  {"commutator", "norm_equality", "desimon", "adjoint", "residual", "consistency",
                   "funcalc", "extended_commutator", "path_agreement", "order"});
  Tolerances t;
  const auto positive = [&](const char* key, double fallback) {
    const double v = s.real(key, fallback);
    if (v <= 0.0) fail(s.path(key), "must be positive");
    return v;
  };
  t.commutator = positive("commutator", t.commutator);
  t.norm_equality = positive("norm_equality", t.norm_equality);
  t.desimon = positive("desimon", t.desimon);
  t.adjoint = positive("adjoint", t.adjoint);
  t.residual = positive("residual", t.residual);
  t.consistency = positive("consistency", t.consistency);
  t.funcalc = positive("funcalc", t.funcalc);
  t.extended_commutator = positive("extended_commutator", t.extended_commutator);
  t.path_agreement = positive("path_agreement", t.path_agreement);
  t.order = positive("order", t.order);
  return t;
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error at " + line_column(text, e.byte) + ": " + e.what());
  }
  const Section root(doc, "", {"generator", "signal", "grid", "experiments", "paths", "output",
                               "tolerances", "funcalc", "sweep", "bench", "seed"});
  RunConfig config;
  if (const auto s = root.seed("seed")) config.seed = *s;
  if (!root.has("generator")) fail("generator", "missing");
  config.generator = parse_generator(root.at("generator"), base_dir);
  if (root.has("signal")) config.signal = parse_signal_spec(root.at("signal"), base_dir);

  if (root.has("grid")) {
    const Section g(root.at("grid"), "grid", {"T", "N"});
    if (g.has("T")) {
      const double t = g.real("T", 0.0);
      if (t <= 0.0) fail(g.path("T"), "must be positive");
      config.horizon = t;
    }
    config.samples = g.count("N", config.samples);
    check_samples(config.samples, g.path("N"));
  }

  if (root.has("experiments")) {
    const json& list = root.at("experiments");
    if (!list.is_array()) fail("experiments", "must be an array of names");
    const auto& known = known_experiments();
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string where = "experiments[" + std::to_string(k) + "]";
      if (!list[k].is_string()) fail(where, "must be a string");
      const auto name = list[k].get<std::string>();
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        fail(where, "unknown experiment '" + name + "'");
      }
      config.experiments.push_back(name);
    }
  }

  if (root.has("paths")) {
    const std::string p = root.text("paths", "direct");
    if (p == "direct") {
      config.paths = {Path::direct};
    } else if (p == "fourier") {
      config.paths = {Path::fourier};
    } else if (p == "both") {
      config.paths = {Path::direct, Path::fourier};
    } else {
      fail("paths", "must be 'direct', 'fourier' or 'both'");
    }
  }

  if (root.has("output")) {
    const Section o(root.at("output"), "output", {"format", "path"});
    config.format = o.text("format", config.format);
    if (config.format != "csv" && config.format != "json") fail(o.path("format"), "must be 'csv' or 'json'");
    if (o.has("path")) config.output_path = resolve(base_dir, o.text("path", ""));
  }

  if (root.has("tolerances")) config.tolerances = parse_tolerances(root.at("tolerances"));

  if (root.has("funcalc")) {
    const Section f(root.at("funcalc"), "funcalc", {"b1", "b2"});
    if (f.has("b1")) config.b1 = parse_function(f.at("b1"), f.path("b1"));
    if (f.has("b2")) config.b2 = parse_function(f.at("b2"), f.path("b2"));
  }

  if (root.has("sweep")) {
    const Section s(root.at("sweep"), "sweep", {"N"});
    if (s.has("N")) {
      config.sweep_samples = parse_sizes(s.at("N"), s.path("N"), true);
      for (std::size_t k = 0; k < config.sweep_samples.size(); ++k) {
        check_samples(config.sweep_samples[k], s.path("N") + "[" + std::to_string(k) + "]");
      }
    }
  }

  if (root.has("bench")) {
    const Section b(root.at("bench"), "bench", {"N", "n"});
    if (b.has("N")) {
      config.bench_samples = parse_sizes(b.at("N"), b.path("N"), true);
      for (std::size_t k = 0; k < config.bench_samples.size(); ++k) {
        check_samples(config.bench_samples[k], b.path("N") + "[" + std::to_string(k) + "]");
      }
    }
    if (b.has("n")) config.bench_dims = parse_sizes(b.at("n"), b.path("n"), false);
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

void override_seed(RunConfig& config, std::uint64_t seed) {
  config.seed = seed;
  config.generator.seed = seed;
  config.signal.seed = seed + 1;
}

std::uint64_t generator_seed(const RunConfig& config) {
  return config.generator.seed.value_or(config.seed);
}

std::uint64_t signal_seed(const RunConfig& config) {
  return config.signal.seed.value_or(config.seed + 1);
}

Generator build_generator(const GeneratorSpec& spec, std::uint64_t seed,
                          std::optional<std::size_t> dim) {
  if (spec.file) {
    CMatrix a;
    try {
      a = read_matrix(*spec.file);
    } catch (const FormatError& e) {
      throw ConfigError("config field 'generator.file': " + std::string(e.what()));
    }
    if (dim && *dim != a.rows()) {
      throw ConfigError("config field 'generator.file': matrix size does not match requested n");
    }
    return make_generator(a);
  }
  const std::size_t n = dim.value_or(spec.n);
  if (spec.preset == "laplacian_1d") return make_generator(laplacian_1d(n));
  if (spec.preset == "random_sectorial") return make_generator(random_sectorial(n, seed, spec.angle));
  if (spec.preset == "jordan_like") return make_generator(jordan_like(n, spec.coupling));
  if (spec.preset == "random_hermitian") return make_generator(random_hermitian(n, seed));
  if (spec.preset == "scalar") {
    if (dim && *dim != 1) throw ConfigError("config field 'generator.preset': scalar has n = 1");
    return make_generator(scalar_matrix(spec.lambda));
  }
  throw ConfigError("config field 'generator.preset': unknown preset '" + spec.preset + "'");
}

double default_horizon(const RunConfig& config, const Generator& g) {
  const double support =
      config.signal.file ? 0.0 : preset_support(config.signal.preset, config.signal.params);
  return support + 20.0 / g.alpha();
}

Signal build_signal(const SignalSpec& spec, const Grid& grid, std::size_t dim, std::uint64_t seed) {
  if (spec.file) {
    Signal f = [&] {
      try {
        return read_signal(*spec.file);
      } catch (const FormatError& e) {
        throw ConfigError("config field 'signal.file': " + std::string(e.what()));
      }
    }();
    if (f.dim() != dim) throw ConfigError("config field 'signal.file': dimension does not match the generator");
    return f;
  }
  try {
    return preset_signal(spec.preset, grid, dim, spec.params, seed);
  } catch (const DimensionError& e) {
    throw ConfigError("config field 'signal.direction': " + std::string(e.what()));
  } catch (const ArgumentError& e) {
    throw ConfigError("config field 'signal': " + std::string(e.what()));
  }
}

HoloFunction build_function(const FunctionSpec& spec) {
  if (spec.kind == "resolvent_frac") return HoloFunction::resolvent_frac(spec.sigma, spec.sign);
  if (spec.kind == "exp_scale") return HoloFunction::exp_scale(spec.t);
  if (spec.kind == "halfplane_indicator") return HoloFunction::halfplane_indicator(spec.side, spec.shift);
  if (spec.kind == "rational") return HoloFunction::rational(spec.numerator, spec.denominator);
  return HoloFunction::const_one();
}

namespace {

nlohmann::ordered_json complex_json(Complex z) { return {z.real(), z.imag()}; }

nlohmann::ordered_json coefficients_json(const std::vector<Complex>& c) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& z : c) out.push_back(complex_json(z));
  return out;
}

nlohmann::ordered_json function_json(const FunctionSpec& f) {
  nlohmann::ordered_json j;
  j["kind"] = f.kind;
  if (f.kind == "resolvent_frac") {
    j["sigma"] = f.sigma;
    j["sign"] = f.sign == Sign::plus ? "+" : "-";
  } else if (f.kind == "exp_scale") {
    j["t"] = f.t;
  } else if (f.kind == "halfplane_indicator") {
    j["side"] = to_string(f.side);
    j["shift"] = f.shift;
  } else if (f.kind == "rational") {
    j["num"] = coefficients_json(f.numerator);
    j["den"] = coefficients_json(f.denominator);
  }
  return j;
}

}  // namespace

nlohmann::ordered_json config_echo(const RunConfig& config) {
  nlohmann::ordered_json j;
  j["seed"] = config.seed;
  auto& g = j["generator"];
  if (config.generator.file) {
    g["file"] = config.generator.file->string();
  } else {
    g["preset"] = config.generator.preset;
    g["n"] = config.generator.preset == "scalar" ? std::size_t{1} : config.generator.n;
    g["seed"] = generator_seed(config);
    if (config.generator.preset == "random_sectorial") g["angle"] = config.generator.angle;
    if (config.generator.preset == "jordan_like") g["coupling"] = config.generator.coupling;
    if (config.generator.preset == "scalar") g["lambda"] = complex_json(config.generator.lambda);
  }
  auto& s = j["signal"];
  if (config.signal.file) {
    s["file"] = config.signal.file->string();
  } else {
    const auto& p = config.signal.params;
    s["preset"] = config.signal.preset;
    s["seed"] = signal_seed(config);
    if (config.signal.preset == "gauss_bump") {
      s["t0"] = p.t0;
      s["width"] = p.width;
    } else if (config.signal.preset == "exp_decay") {
      s["beta"] = p.beta;
    } else {
      s["modes"] = p.modes;
      s["cutoff_start"] = p.cutoff_start;
      s["cutoff_end"] = p.cutoff_end;
    }
    if (p.direction) s["direction"] = coefficients_json(*p.direction);
  }
  auto& grid = j["grid"];
  if (config.horizon) grid["T"] = *config.horizon;
  grid["N"] = config.samples;
  j["experiments"] = config.experiments;
  j["paths"] = config.paths.size() == 2 ? "both" : to_string(config.paths.front());
  j["output"]["format"] = config.format;
  const auto& t = config.tolerances;
  j["tolerances"] = {{"commutator", t.commutator},
                     {"norm_equality", t.norm_equality},
                     {"desimon", t.desimon},
                     {"adjoint", t.adjoint},
                     {"residual", t.residual},
                     {"consistency", t.consistency},
                     {"funcalc", t.funcalc},
                     {"extended_commutator", t.extended_commutator},
                     {"path_agreement", t.path_agreement},
                     {"order", t.order}};
  j["funcalc"]["b1"] = function_json(config.b1);
  j["funcalc"]["b2"] = function_json(config.b2);
  j["sweep"]["N"] = config.sweep_samples;
  j["bench"]["N"] = config.bench_samples;
  j["bench"]["n"] = config.bench_dims;
  return j;
}

}  // namespace maxregkit::app
