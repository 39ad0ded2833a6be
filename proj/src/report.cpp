#include "zsiglab/report.hpp"

#include <sstream>

#include "zsiglab/error.hpp"

namespace zsig {

void Report::add_row(std::vector<ojson> row) {
  if (row.size() != columns.size())
    throw Error(ErrorKind::Precondition, "row has " + std::to_string(row.size()) + " cells, expected " +
                                             std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::string Report::to_json() const {
  ojson out = ojson::object();
  out["config"] = config;
  ojson arr = ojson::array();
  for (const auto& r : rows) {
    ojson obj = ojson::object();
    for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = r[i];
    arr.push_back(std::move(obj));
  }
  out["rows"] = std::move(arr);
  out["summary"] = summary;
  return out.dump(2) + "\n";
}

std::string render_cell(const ojson& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string Report::to_csv() const {
  std::ostringstream os;
  os << "# config: " << config.dump() << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << csv_escape(columns[i]);
  os << "\r\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_escape(render_cell(r[i]));
    os << "\r\n";
  }
  os << "# summary: " << summary.dump() << "\n";
  return os.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (text[i] == '#') {  // comment line
      while (i < n && text[i] != '\n') ++i;
      ++i;
      continue;
    }
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    for (; i < n; ++i) {
      const char ch = text[i];
      if (quoted) {
        if (ch == '"' && i + 1 < n && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else if (ch == '"') {
          quoted = false;
        } else {
          field += ch;
        }
      } else if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        record.push_back(std::move(field));
        field.clear();
      } else if (ch == '\r' || ch == '\n') {
        if (ch == '\r' && i + 1 < n && text[i + 1] == '\n') ++i;
        ++i;
        break;
      } else {
        field += ch;
      }
    }
    record.push_back(std::move(field));
    out.push_back(std::move(record));
  }
  return out;
}

}  // namespace zsig
