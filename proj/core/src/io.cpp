#include "maxregkit/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "maxregkit/errors.hpp"

namespace maxregkit {

namespace {

using nlohmann::json;

json parse_document(std::string_view text, const char* what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

const json& field(const json& doc, const char* key, const char* what) {
  if (!doc.is_object()) throw FormatError(std::string(what) + ": top level must be an object");
  const auto it = doc.find(key);
  if (it == doc.end()) throw FormatError(std::string(what) + ": missing field '" + key + "'");
  return *it;
}

std::size_t positive_int(const json& doc, const char* key, const char* what) {
  const json& v = field(doc, key, what);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw FormatError(std::string(what) + ": field '" + key + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

// rows x cols table of reals, appended row-major into out as one component.
std::vector<double> table(const json& doc, const char* key, std::size_t rows, std::size_t cols,
                          const char* what) {
  const json& v = field(doc, key, what);
  const std::string where = std::string(what) + ": field '" + key + "'";
  if (!v.is_array() || v.size() != rows) {
    throw FormatError(where + " must be an array of " + std::to_string(rows) + " rows");
  }
  std::vector<double> out;
  out.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = v[i];
    if (!row.is_array() || row.size() != cols) {
      throw FormatError(where + " row " + std::to_string(i) + " must have " +
                        std::to_string(cols) + " entries");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      if (!row[j].is_number()) {
        throw FormatError(where + " entry [" + std::to_string(i) + "][" + std::to_string(j) +
                          "] is not a number");
      }
      out.push_back(row[j].get<double>());
    }
  }
  return out;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out << text << '\n';
}

json split(std::span<const Complex> values, std::size_t rows, std::size_t cols, bool imag) {
  json t = json::array();
  for (std::size_t i = 0; i < rows; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < cols; ++j) {
      const Complex z = values[i * cols + j];
      row.push_back(imag ? z.imag() : z.real());
    }
    t.push_back(std::move(row));
  }
  return t;
}

}  // namespace

CMatrix parse_matrix(std::string_view text) {
  const char* what = "matrix";
  const json doc = parse_document(text, what);
  const std::size_t n = positive_int(doc, "n", what);
  const auto re = table(doc, "re", n, n, what);
  const auto im = table(doc, "im", n, n, what);
  std::vector<Complex> entries(n * n);
  for (std::size_t k = 0; k < entries.size(); ++k) entries[k] = {re[k], im[k]};
  try {
    return CMatrix(n, n, std::move(entries));
  } catch (const Error& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

std::string format_matrix(const CMatrix& m) {
  if (!m.is_square()) throw DimensionError("format_matrix: matrix must be square");
  json doc;
  doc["n"] = m.rows();
  doc["re"] = split(m.entries(), m.rows(), m.cols(), false);
  doc["im"] = split(m.entries(), m.rows(), m.cols(), true);
  return doc.dump();
}

CMatrix read_matrix(const std::filesystem::path& path) { return parse_matrix(slurp(path)); }

void write_matrix(const std::filesystem::path& path, const CMatrix& m) {
  dump(path, format_matrix(m));
}

Signal parse_signal(std::string_view text) {
  const char* what = "signal";
  const json doc = parse_document(text, what);
  const json& horizon = field(doc, "T", what);
  if (!horizon.is_number()) throw FormatError("signal: field 'T' must be a number");
  const std::size_t n = positive_int(doc, "N", what);
  const std::size_t dim = positive_int(doc, "dim", what);
  const auto re = table(doc, "re", n, dim, what);
  const auto im = table(doc, "im", n, dim, what);
  std::vector<Complex> samples(n * dim);
  for (std::size_t k = 0; k < samples.size(); ++k) samples[k] = {re[k], im[k]};
  try {
    return Signal(Grid(horizon.get<double>(), n), dim, std::move(samples));
  } catch (const Error& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

std::string format_signal(const Signal& f) {
  json doc;
  doc["T"] = f.grid().horizon();
  doc["N"] = f.size();
  doc["dim"] = f.dim();
  doc["re"] = split(f.samples(), f.size(), f.dim(), false);
  doc["im"] = split(f.samples(), f.size(), f.dim(), true);
  return doc.dump();
}

Signal read_signal(const std::filesystem::path& path) { return parse_signal(slurp(path)); }

void write_signal(const std::filesystem::path& path, const Signal& f) {
  dump(path, format_signal(f));
}

}  // namespace maxregkit
