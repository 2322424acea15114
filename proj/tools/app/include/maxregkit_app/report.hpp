#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace maxregkit::app {

/// One experiment outcome. `value` is the residual, gap, constant, order or
/// ratio the operator reports; `pass` compares it against `tolerance`.
struct Row {
  std::string experiment;
  std::string op;
  std::string path;
  std::size_t samples = 0;
  double horizon = 0.0;
  std::size_t dim = 0;
  double alpha = 0.0;
  double value = 0.0;
  double tail_bound = 0.0;
  double wall_time_s = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string error;
  bool validation_error = false;
};

struct Report {
  std::string command;
  nlohmann::ordered_json config;
  std::vector<Row> rows;
  std::string version;
  std::string timestamp;

  bool all_pass() const;
  /// 0 all pass, 1 some tolerance failed, 3 some row hit a validation error.
  int exit_code() const;
};

/// Header: experiment,operator,path,N,T,n,alpha,value,tail_bound,wall_time_s,pass
std::string to_csv(const Report& report);
std::string to_json(const Report& report);

/// UTC, ISO 8601.
std::string utc_timestamp();

}  // namespace maxregkit::app
