#include "enumdist/reporting.hpp"

#include "json.hpp"

namespace enumdist {

namespace {

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string csv_cell(const std::string& s) {
  if (!needs_quoting(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void append_row(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += csv_cell(cells[i]);
  }
  out += '\n';
}

}  // namespace

std::string to_csv(const ReportTable& t) {
  std::string out;
  for (const auto& [k, v] : t.meta) out += "# " + k + "=" + v + "\n";
  append_row(out, t.columns);
  for (const auto& row : t.rows) append_row(out, row);
  return out;
}

std::string to_json(const ReportTable& t) {
  nlohmann::ordered_json j;
  auto& meta = j["meta"];
  meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.meta) meta[k] = v;
  j["columns"] = t.columns;
  auto& rows = j["rows"];
  rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) rows.push_back(row);
  return j.dump(2) + "\n";
}

std::string fmt_opt(const std::optional<std::int64_t>& v) {
  return v ? std::to_string(*v) : "inf";
}

std::string fmt_int(std::int64_t v) { return std::to_string(v); }

}  // namespace enumdist
