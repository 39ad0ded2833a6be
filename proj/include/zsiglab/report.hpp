#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace zsig {

inline constexpr const char* kVersion = "0.1.0";

using ojson = nlohmann::ordered_json;

// One experiment's output. CSV and JSON are two renderings of the same cells.
struct Report {
  ojson config = ojson::object();
  std::vector<std::string> columns;
  std::vector<std::vector<ojson>> rows;
  ojson summary = ojson::object();

  void add_row(std::vector<ojson> row);
  // {"config": ..., "rows": [{column: value}], "summary": ...}
  std::string to_json() const;
  // "# config: {...}" line, RFC-4180 header and rows, "# summary: {...}" line.
  std::string to_csv() const;
};

// Text of a cell in CSV: strings raw, everything else as its JSON literal.
std::string render_cell(const ojson& v);
std::string csv_escape(const std::string& field);
// RFC-4180 records, skipping '#' comment lines.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace zsig
