#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace netsom {

// Plain comma-separated tables, UTF-8, no quoting (ids never contain commas).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws when absent.
  std::size_t column(const std::string& name) const;
};

CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// Shortest round-trip decimal form of a double (std::to_chars).
std::string fmt_double(double v);

double parse_double(std::string_view s);
long long parse_int(std::string_view s);

}  // namespace netsom
