#include "epiq/report.hpp"

#include <cmath>
#include <cstdio>

namespace epiq {

std::string to_string(ReportKind kind) {
  switch (kind) {
  case ReportKind::validation: return "validation";
  case ReportKind::born: return "born";
  case ReportKind::gleason: return "gleason";
  case ReportKind::simulation: return "simulation";
  case ReportKind::bell: return "bell";
  case ReportKind::reduce: return "reduce";
  case ReportKind::gcs: return "gcs";
  }
  return "unknown";
}

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  if (x == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

bool is_scalar_array(const Json& v) {
  for (const auto& e : v)
    if (e.is_structured()) return false;
  return true;
}

void write(const Json& v, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
  case Json::value_t::object: {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, value] : v.items()) {
      if (!first) out += ",\n";
      first = false;
      out += inner + Json(key).dump() + ": ";
      write(value, indent + 1, out);
    }
    out += "\n" + pad + "}";
    return;
  }
  case Json::value_t::array: {
    if (v.empty()) {
      out += "[]";
      return;
    }
    // Rows of numbers stay on one line.
    if (is_scalar_array(v)) {
      out += "[";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        write(v[i], indent + 1, out);
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ",\n";
      out += inner;
      write(v[i], indent + 1, out);
    }
    out += "\n" + pad + "]";
    return;
  }
  case Json::value_t::number_float:
    out += format_double(v.get<double>());
    return;
  default:
    out += v.dump();
    return;
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_field(fields[i]);
  }
  return line + "\n";
}

} // namespace

std::string canonical_json(const Json& value) {
  std::string out;
  write(value, 0, out);
  return out + "\n";
}

std::string to_json_text(const Report& report) {
  Json doc = Json::object();
  doc["kind"] = to_string(report.kind);
  doc["metadata"] = report.metadata;
  doc["payload"] = report.payload;
  return canonical_json(doc);
}

std::string to_csv_text(const Report& report) {
  std::string out;
  for (std::size_t t = 0; t < report.tables.size(); ++t) {
    const auto& table = report.tables[t];
    if (t) out += "\n";
    out += "# " + table.name + "\n";
    out += csv_row(table.header);
    for (const auto& row : table.rows) out += csv_row(row);
  }
  return out;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

Json to_json(const CMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const RMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

} // namespace epiq
