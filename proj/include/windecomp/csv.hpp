#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace windecomp::csv {

/// Header plus data rows; row numbers are 1-based over data rows.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index for `name`, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
  /// Column index for `name`; throws ParseError naming `module` when absent.
  std::size_t require_column(std::string_view module, std::string_view name) const;
};

/**
 * Parses comma-separated text with a header row.
 *
 * Handles CRLF line endings, a UTF-8 byte-order mark, blank trailing lines
 * and double-quoted fields. Every data row must have exactly as many fields
 * as the header.
 */
Table parse(std::string_view text, std::string_view module);

std::string trim(std::string_view s);

/// Empty field -> nullopt; otherwise the full field must be a number.
std::optional<double> optional_number(std::string_view field, std::string_view module,
                                      std::string_view column, std::size_t row);
double number(std::string_view field, std::string_view module, std::string_view column,
              std::size_t row);
std::optional<long long> optional_integer(std::string_view field, std::string_view module,
                                          std::string_view column, std::size_t row);
long long integer(std::string_view field, std::string_view module, std::string_view column,
                  std::size_t row);

std::string read_file(const std::string& path, std::string_view module);
void write_file(const std::string& path, std::string_view contents);

}  // namespace windecomp::csv
