#pragma once

#include <string>
#include <vector>

namespace stn {

/// Small CSV table with a mandatory header row. Quoting follows RFC 4180:
/// fields containing commas, quotes or newlines are double-quoted, embedded
/// quotes doubled.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position for a header name, or -1.
  int column(const std::string& name) const;

  /// Throws InputError naming the first missing column.
  void require_columns(const std::vector<std::string>& names, const std::string& what) const;

  std::string to_string() const;

  bool operator==(const CsvTable&) const = default;
};

/// Parses CSV text (CRLF tolerated, trailing newline optional). Every row
/// must have as many fields as the header.
CsvTable parse_csv(const std::string& text, const std::string& origin = "<memory>");

std::string csv_escape(const std::string& field);

}  // namespace stn
