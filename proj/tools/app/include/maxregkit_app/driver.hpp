#pragma once

#include <functional>
#include <string>

#include "maxregkit_app/config.hpp"
#include "maxregkit_app/report.hpp"

namespace maxregkit::app {

/// Runs the configured experiments once on the configured grid.
/// Generator validation failures propagate as ValidationError; failures inside
/// an experiment become rows carrying the error text.
Report run(const RunConfig& config);

/// Repeats run over config.sweep_samples and appends one fitted order row
/// (least-squares slope of log2 value against log2 N, negated) per operator
/// whose value is a discretization error.
Report sweep(const RunConfig& config);

/// Wall time of the direct and fourier forward operator for every (n, N) cell,
/// their agreement, the direct/fourier time ratio, and a trend row per n that
/// passes iff the ratio strictly increases with N.
Report bench(const RunConfig& config);

/// Least-squares convergence order: -slope of log2(values) against log2(samples).
double fitted_order(const std::vector<std::size_t>& samples, const std::vector<double>& values);

/// Progress lines go here unless null.
void set_progress_sink(std::function<void(const std::string&)> sink);

}  // namespace maxregkit::app
