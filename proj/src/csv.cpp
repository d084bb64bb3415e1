#include "stn/csv.hpp"

#include <fmt/format.h>

#include "stn/common.hpp"

namespace stn {

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

void CsvTable::require_columns(const std::vector<std::string>& names,
                               const std::string& what) const {
  for (const auto& name : names)
    if (column(name) < 0)
      throw InputError(fmt::format("{} is missing the '{}' column", what, name));
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string CsvTable::to_string() const {
  std::string out;
  auto emit_row = [&out](const std::vector<std::string>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(row[i]);
    }
    out += '\n';
  };
  emit_row(header);
  for (const auto& row : rows) emit_row(row);
  return out;
}

CsvTable parse_csv(const std::string& text, const std::string& origin) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  size_t line = 1;

  auto end_field = [&] {
    record.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    if (field_started || !record.empty()) {
      end_field();
      records.push_back(record);
      record.clear();
    }
  };

  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty())
          throw InputError(fmt::format("{}:{}: stray quote inside unquoted field", origin, line));
        quoted = true;
        field_started = true;
        break;
      case ',':
        end_field();
        field_started = true;  // the field after the comma exists even if empty
        break;
      case '\r': break;
      case '\n': end_record(); ++line; break;
      default: field += c; field_started = true;
    }
  }
  if (quoted) throw InputError(fmt::format("{}: unterminated quoted field", origin));
  end_record();

  if (records.empty()) throw InputError(fmt::format("{}: empty CSV", origin));
  CsvTable table;
  table.header = records.front();
  for (size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size())
      throw InputError(fmt::format("{}: row {} has {} fields, header has {}", origin, r + 1,
                                   records[r].size(), table.header.size()));
    table.rows.push_back(records[r]);
  }
  return table;
}

}  // namespace stn
