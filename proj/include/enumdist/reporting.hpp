#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "enumdist/dyadic.hpp"

namespace enumdist {

// One machine-readable report: ordered metadata, column names, string-valued
// cells. Both encoders emit exactly these strings, so the two formats always
// carry identical values; nothing here ever passes through floating point.
struct ReportTable {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// Metadata as leading "# key=value" lines, then the column row, then data
// rows, RFC-style quoting only where needed.
std::string to_csv(const ReportTable& t);

// {"meta": {...}, "columns": [...], "rows": [[...], ...]} with keys in
// insertion order and two-space indentation.
std::string to_json(const ReportTable& t);

// "inf" for the infinite sentinel, otherwise the decimal integer.
std::string fmt_opt(const std::optional<std::int64_t>& v);

std::string fmt_int(std::int64_t v);

}  // namespace enumdist
