#pragma once

#include "json.hpp"
#include <string>
#include <vector>

#include "epiq/linalg.hpp"

namespace epiq {

using Json = nlohmann::json;

enum class ReportKind { validation, born, gleason, simulation, bell, reduce, gcs };
std::string to_string(ReportKind kind);

struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Everything a CLI invocation prints. metadata holds the model hash, seed,
/// tolerances and realization mode where they apply.
struct Report {
  ReportKind kind = ReportKind::validation;
  Json metadata = Json::object();
  Json payload = Json::object();
  std::vector<CsvTable> tables;
};

/// 17 significant digits; non-finite values become null in JSON.
std::string format_double(double x);

/// Sorted keys, two-space indentation, doubles through format_double.
std::string canonical_json(const Json& value);

std::string to_json_text(const Report& report);
/// Tables one after another, each introduced by a "# name" line.
std::string to_csv_text(const Report& report);

Json complex_to_json(Complex z);  // [re, im]
Json to_json(const CVector& v);
Json to_json(const CMatrix& m);
Json to_json(const RMatrix& m);

} // namespace epiq
