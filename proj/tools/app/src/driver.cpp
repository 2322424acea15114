#include "maxregkit_app/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>

#include "maxregkit/errors.hpp"
#include "maxregkit/funcalc.hpp"
#include "maxregkit/io.hpp"
#include "maxregkit/maxreg.hpp"

#ifndef MAXREGKIT_VERSION
#define MAXREGKIT_VERSION "0.0.0"
#endif

namespace maxregkit::app {

namespace {

using Clock = std::chrono::steady_clock;

std::function<void(const std::string&)> g_progress;

void progress(const std::string& line) {
  if (g_progress) g_progress(line);
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Everything an experiment needs, built once per (generator, grid).
struct Context {
  const RunConfig& config;
  const Generator& g;
  Signal f;
  KernelCache cache;
  double f_norm;
  double tail;

  Context(const RunConfig& c, const Generator& gen, Signal signal)
      : config(c),
        g(gen),
        f(std::move(signal)),
        cache(gen, f.grid()),
        f_norm(l2_norm(f)),
        tail(truncation_tail_bound(gen, f.grid(), f_norm)) {}

  Row row(const std::string& experiment, const std::string& op, const std::string& path,
          double value, double tolerance, bool pass) const {
    Row r;
    r.experiment = experiment;
    r.op = op;
    r.path = path;
    r.samples = f.size();
    r.horizon = f.grid().horizon();
    r.dim = g.dim();
    r.alpha = g.alpha();
    r.value = value;
    r.tail_bound = tail;
    r.tolerance = tolerance;
    r.pass = pass;
    return r;
  }

  Row below(const std::string& experiment, const std::string& op, const std::string& path,
            double value, double tolerance) const {
    return row(experiment, op, path, value, tolerance, value <= tolerance);
  }
};

double relative(double num, double den) { return den > 0.0 ? num / den : num; }

std::vector<Row> commutator(const Context& c) {
  std::vector<Row> rows;
  for (const Path p : c.config.paths) {
    const auto start = Clock::now();
    const auto rep = commutator_residual(c.cache, c.f, p);
    rows.push_back(c.below("commutator", "commutator", to_string(p), rep.rel_residual,
                           c.config.tolerances.commutator));
    rows.back().wall_time_s = seconds_since(start);
  }
  return rows;
}

std::vector<Row> norm_equality(const Context& c) {
  const auto start = Clock::now();
  const auto rep = norm_equality_report(c.cache, c.f);
  Row r = c.below("norm_equality", "norm_equality", "direct", rep.rel_gap,
                  c.config.tolerances.norm_equality);
  r.wall_time_s = seconds_since(start);
  return {r};
}

std::vector<Row> desimon(const Context& c) {
  auto start = Clock::now();
  const double constant = desimon_constant(c.g);
  Row rc = c.row("desimon", "desimon_constant", "fourier", constant, 0.0, std::isfinite(constant));
  rc.wall_time_s = seconds_since(start);

  start = Clock::now();
  const double plus = l2_norm(mreg_direct(c.cache, c.f, Sign::plus));
  const double minus = l2_norm(mreg_direct(c.cache, c.f, Sign::minus));
  const double ratio = relative(std::max(plus, minus), c.f_norm);
  const double slack = c.config.tolerances.desimon;
  Row rr = c.row("desimon", "regularity_ratio", "direct", ratio, constant + slack,
                 ratio <= constant + slack);
  rr.wall_time_s = seconds_since(start);
  return {rc, rr};
}

std::vector<Row> adjoint(const Context& c, std::uint64_t seed) {
  const Signal phi = build_signal(c.config.signal, c.f.grid(), c.g.dim(), seed + 1000);
  std::vector<Row> rows;
  for (const Sign s : {Sign::plus, Sign::minus}) {
    const auto start = Clock::now();
    const double defect = adjoint_defect(c.g, c.f, phi, s);
    rows.push_back(c.below("adjoint", s == Sign::plus ? "adjoint_plus" : "adjoint_minus", "direct", defect,
                           c.config.tolerances.adjoint));
    rows.back().wall_time_s = seconds_since(start);
  }
  return rows;
}

std::vector<Row> residuals(const Context& c) {
  std::vector<Row> rows;
  const auto& t = c.config.tolerances;
  const CMatrix& a = c.g.matrix();
  for (const Sign s : {Sign::plus, Sign::minus}) {
    auto start = Clock::now();
    const auto ode = ode_residual(c.cache, c.f, s);
    const std::string name = s == Sign::plus ? "forward" : "backward";
    rows.push_back(c.row("residuals", "ode_" + name, "direct", ode.rel_residual, t.residual,
                         ode.rel_residual <= t.residual && ode.initial_value == 0.0));
    rows.back().wall_time_s = seconds_since(start);

    start = Clock::now();
    const Signal u = s == Sign::plus ? solve_forward(c.cache, c.f) : solve_backward(c.cache, c.f);
    Signal m = mreg_direct(c.cache, c.f, s);
    if (s == Sign::minus) m *= -1.0;
    const double gap = relative(l2_norm(apply_pointwise(a, u) - m), c.f_norm);
    rows.push_back(c.below("residuals", "consistency_" + name, "direct", gap, t.consistency));
    rows.back().wall_time_s = seconds_since(start);
  }
  return rows;
}

std::vector<Row> funcalc(const Context& c) {
  const auto start = Clock::now();
  const HoloFunction b1 = build_function(c.config.b1);
  const HoloFunction b2 = build_function(c.config.b2);
  const bool projection = b1.kind() == HoloFunction::Kind::halfplane_indicator ||
                          b2.kind() == HoloFunction::Kind::halfplane_indicator;
  Row r;
  if (projection) {
    double defect = 0.0;
    for (const auto* b : {&b1, &b2}) {
      const CMatrix p = evaluate(c.g, *b);
      defect = std::max(defect, frob_norm(matmul(p, p) - p) / std::max(1.0, frob_norm(p)));
    }
    r = c.below("funcalc", "projection_idempotence", "contour", defect, c.config.tolerances.funcalc);
  } else {
    r = c.below("funcalc", "homomorphism", "contour", homomorphism_defect(c.g, b1, b2),
                c.config.tolerances.funcalc);
  }
  r.wall_time_s = seconds_since(start);
  return {r};
}

std::vector<Row> extended_commutator(const Context& c) {
  const HoloFunction b1 = build_function(c.config.b1);
  const HoloFunction b2 = build_function(c.config.b2);
  std::vector<Row> rows;
  for (const Path p : c.config.paths) {
    const auto start = Clock::now();
    const auto rep = extended_commutator_residual(c.g, b1, b2, c.f, p);
    rows.push_back(c.below("extended_commutator", "extended_commutator", to_string(p),
                           rep.rel_residual, c.config.tolerances.extended_commutator));
    rows.back().wall_time_s = seconds_since(start);
  }
  return rows;
}

std::vector<Row> dispatch(const Context& c, const std::string& name, std::uint64_t seed) {
  if (name == "commutator") return commutator(c);
  if (name == "norm_equality") return norm_equality(c);
  if (name == "desimon") return desimon(c);
  if (name == "adjoint") return adjoint(c, seed);
  if (name == "residuals") return residuals(c);
  if (name == "funcalc") return funcalc(c);
  return extended_commutator(c);
}

std::vector<Row> run_on_grid(const RunConfig& config, const Generator& g, const Grid& grid) {
  const std::uint64_t seed = signal_seed(config);
  Signal f = build_signal(config.signal, grid, g.dim(), seed);
  if (config.signal.file && !(f.grid() == grid)) {
    throw ConfigError("config field 'signal.file': signal grid differs from the requested grid");
  }
  const Context c(config, g, std::move(f));
  std::vector<Row> rows;
  for (const auto& name : config.experiments) {
    progress(name + " N=" + std::to_string(grid.size()));
    try {
      auto produced = dispatch(c, name, seed);
      rows.insert(rows.end(), produced.begin(), produced.end());
    } catch (const ValidationError& e) {
      Row r = c.row(name, name, "", std::nan(""), 0.0, false);
      r.error = e.what();
      r.validation_error = true;
      rows.push_back(r);
    } catch (const Error& e) {
      Row r = c.row(name, name, "", std::nan(""), 0.0, false);
      r.error = e.what();
      rows.push_back(r);
    }
  }
  return rows;
}

Grid configured_grid(const RunConfig& config, const Generator& g, std::size_t samples) {
  const double horizon = config.horizon.value_or(default_horizon(config, g));
  try {
    return Grid(horizon, samples);
  } catch (const ArgumentError&) {
    // T/N not exactly representable; the nearest representable horizon is used.
    const double h = horizon / static_cast<double>(samples);
    return Grid(h * static_cast<double>(samples), samples);
  }
}

Report make_report(const RunConfig& config, const std::string& command) {
  Report report;
  report.command = command;
  report.config = config_echo(config);
  report.version = MAXREGKIT_VERSION;
  report.timestamp = utc_timestamp();
  return report;
}

Grid signal_file_grid(const RunConfig& config) {
  try {
    return read_signal(*config.signal.file).grid();
  } catch (const FormatError& e) {
    throw ConfigError("config field 'signal.file': " + std::string(e.what()));
  }
}

// Operators whose value is a discretization error expected to vanish under refinement.
bool converges(const Row& r) {
  return r.op == "commutator" || r.op == "extended_commutator" || r.op == "adjoint_plus" ||
         r.op == "adjoint_minus" || r.op == "ode_forward" || r.op == "ode_backward" ||
         (r.op == "norm_equality" && r.pass);
}

// Residuals at this level are roundoff; an order fitted to them means nothing.
constexpr double kRoundoffFloor = 1e-12;

}  // namespace

void set_progress_sink(std::function<void(const std::string&)> sink) { g_progress = std::move(sink); }

double fitted_order(const std::vector<std::size_t>& samples, const std::vector<double>& values) {
  const std::size_t m = samples.size();
  if (m < 2 || values.size() != m) return std::nan("");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double x = std::log2(static_cast<double>(samples[k]));
    const double y = std::log2(values[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double dm = static_cast<double>(m);
  return -(dm * sxy - sx * sy) / (dm * sxx - sx * sx);
}

Report run(const RunConfig& config) {
  Report report = make_report(config, "run");
  if (config.experiments.empty()) return report;
  const Generator g = build_generator(config.generator, generator_seed(config));
  const Grid grid = config.signal.file ? signal_file_grid(config) : configured_grid(config, g, config.samples);
  report.rows = run_on_grid(config, g, grid);
  return report;
}

Report sweep(const RunConfig& config) {
  Report report = make_report(config, "sweep");
  if (config.experiments.empty()) return report;
  if (config.signal.file && config.sweep_samples.size() > 1) {
    throw ConfigError("config field 'signal.file': a sampled signal cannot be swept over N");
  }
  const Generator g = build_generator(config.generator, generator_seed(config));
  for (const std::size_t n : config.sweep_samples) {
    const Grid grid = config.signal.file ? signal_file_grid(config) : configured_grid(config, g, n);
    auto rows = run_on_grid(config, g, grid);
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  if (config.sweep_samples.size() < 2) return report;

  // Group by (operator, path) in first-appearance order.
  std::vector<std::pair<std::string, std::string>> keys;
  std::map<std::pair<std::string, std::string>, std::vector<const Row*>> groups;
  for (const auto& r : report.rows) {
    if (!r.error.empty() || !converges(r)) continue;
    const auto key = std::make_pair(r.op, r.path);
    if (!groups.contains(key)) keys.push_back(key);
    groups[key].push_back(&r);
  }
  std::vector<Row> orders;
  for (const auto& key : keys) {
    const auto& group = groups[key];
    if (group.size() != config.sweep_samples.size()) continue;
    std::vector<std::size_t> ns;
    std::vector<double> values;
    double largest = 0.0;
    double total_time = 0.0;
    for (const Row* r : group) {
      ns.push_back(r->samples);
      values.push_back(std::max(r->value, std::numeric_limits<double>::min()));
      largest = std::max(largest, r->value);
      total_time += r->wall_time_s;
    }
    Row o = *group.back();
    o.op = key.first + "_order";
    o.value = fitted_order(ns, values);
    o.tolerance = config.tolerances.order;
    o.pass = o.value >= config.tolerances.order || largest <= kRoundoffFloor;
    o.wall_time_s = total_time;
    orders.push_back(o);
  }
  report.rows.insert(report.rows.end(), orders.begin(), orders.end());
  return report;
}

namespace {

// Smallest of several timings, repeated until about a tenth of a second has
// been spent (at least three runs).
template <typename F>
double best_time(F&& body) {
  double best = std::numeric_limits<double>::infinity();
  double spent = 0.0;
  for (int k = 0; k < 3 || (spent < 0.1 && k < 200); ++k) {
    const auto start = Clock::now();
    body();
    const double t = seconds_since(start);
    best = std::min(best, t);
    spent += t;
  }
  return best;
}

}  // namespace

Report bench(const RunConfig& config) {
  Report report = make_report(config, "bench");
  if (config.signal.file) throw ConfigError("config field 'signal.file': bench needs a signal preset");
  for (const std::size_t n : config.bench_dims) {
    const Generator g = build_generator(config.generator, generator_seed(config), n);
    std::vector<double> ratios;
    Row last;
    for (const std::size_t samples : config.bench_samples) {
      progress("bench n=" + std::to_string(n) + " N=" + std::to_string(samples));
      const Grid grid = configured_grid(config, g, samples);
      const Context c(config, g, build_signal(config.signal, grid, n, signal_seed(config)));

      Signal direct(grid, n);
      Signal fourier(grid, n);
      const double t_direct = best_time([&] { direct = mreg_forward_direct(g, c.f).output; });
      const double t_fourier = best_time([&] { fourier = mreg_fourier(g, c.f, Sign::plus).output; });
      const double agreement = relative(l2_norm(direct - fourier), l2_norm(direct));
      const double tol = config.tolerances.path_agreement;

      Row rd = c.below("bench", "mreg_forward", "direct", agreement, tol);
      rd.wall_time_s = t_direct;
      Row rf = c.below("bench", "mreg_forward", "fourier", agreement, tol);
      rf.wall_time_s = t_fourier;
      const double ratio = t_direct / t_fourier;
      Row rr = c.row("bench", "time_ratio", "direct/fourier", ratio, 0.0, std::isfinite(ratio));
      rr.wall_time_s = t_direct + t_fourier;
      report.rows.insert(report.rows.end(), {rd, rf, rr});
      ratios.push_back(ratio);
      last = rr;
    }
    if (ratios.size() >= 2) {
      bool increasing = true;
      for (std::size_t k = 1; k < ratios.size(); ++k) increasing = increasing && ratios[k] > ratios[k - 1];
      Row trend = last;
      trend.op = "time_ratio_trend";
      trend.value = ratios.back() / ratios.front();
      trend.pass = increasing;
      trend.tolerance = 1.0;
      report.rows.push_back(trend);
    }
  }
  return report;
}

}  // namespace maxregkit::app
