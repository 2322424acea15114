#include "maxregkit_app/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <sstream>

namespace maxregkit::app {

bool Report::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

int Report::exit_code() const {
  for (const auto& r : rows)
    if (r.validation_error) return 3;
  return all_pass() ? 0 : 1;
}

namespace {

// Shortest representation that round-trips.
std::string number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  for (int precision = 6; precision < 17; ++precision) {
    char shorter[32];
    std::snprintf(shorter, sizeof shorter, "%.*g", precision, x);
    if (std::strtod(shorter, nullptr) == x) return shorter;
  }
  return buf;
}

}  // namespace

std::string to_csv(const Report& report) {
  std::ostringstream out;
  out << "experiment,operator,path,N,T,n,alpha,value,tail_bound,wall_time_s,pass\n";
  for (const auto& r : report.rows) {
    out << r.experiment << ',' << r.op << ',' << r.path << ',' << r.samples << ','
        << number(r.horizon) << ',' << r.dim << ',' << number(r.alpha) << ',' << number(r.value)
        << ',' << number(r.tail_bound) << ',' << number(r.wall_time_s) << ','
        << (r.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string to_json(const Report& report) {
  nlohmann::ordered_json doc;
  doc["tool"] = "maxregkit";
  doc["version"] = report.version;
  doc["timestamp"] = report.timestamp;
  doc["command"] = report.command;
  doc["config"] = report.config;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json j;
    j["experiment"] = r.experiment;
    j["operator"] = r.op;
    j["path"] = r.path;
    j["N"] = r.samples;
    j["T"] = r.horizon;
    j["n"] = r.dim;
    j["alpha"] = r.alpha;
    j["value"] = std::isfinite(r.value) ? nlohmann::ordered_json(r.value) : nlohmann::ordered_json(number(r.value));
    j["tail_bound"] = r.tail_bound;
    j["wall_time_s"] = r.wall_time_s;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    if (!r.error.empty()) j["error"] = r.error;
    rows.push_back(std::move(j));
  }
  doc["rows"] = std::move(rows);
  doc["pass"] = report.all_pass();
  doc["exit_code"] = report.exit_code();
  return doc.dump(2) + "\n";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace maxregkit::app
