#include "windecomp/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "windecomp/error.hpp"

namespace windecomp::csv {

namespace {

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<std::size_t> Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::require_column(std::string_view module, std::string_view name) const {
  if (auto c = column(name)) return *c;
  throw ParseError(std::string(module), fmt::format("missing column '{}'", name));
}

Table parse(std::string_view text, std::string_view module) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  Table table;
  bool have_header = false;
  std::size_t row = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    auto fields = split_line(line);
    for (auto& f : fields) f = trim(f);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    ++row;
    if (fields.size() != table.header.size()) {
      throw ParseError(std::string(module),
                       fmt::format("wrong column count ({} instead of {}), row {}", fields.size(),
                                   table.header.size(), row));
    }
    table.rows.push_back(std::move(fields));
  }
  if (!have_header) throw ParseError(std::string(module), "empty input");
  return table;
}

std::optional<double> optional_number(std::string_view field, std::string_view module,
                                      std::string_view column, std::size_t row) {
  if (field.empty()) return std::nullopt;
  double v = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw ParseError(std::string(module),
                     fmt::format("non-numeric {} '{}', row {}", column, field, row));
  }
  return v;
}

double number(std::string_view field, std::string_view module, std::string_view column,
              std::size_t row) {
  if (auto v = optional_number(field, module, column, row)) return *v;
  throw ParseError(std::string(module), fmt::format("missing {}, row {}", column, row));
}

std::optional<long long> optional_integer(std::string_view field, std::string_view module,
                                          std::string_view column, std::size_t row) {
  if (field.empty()) return std::nullopt;
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    // Registries sometimes carry years as "2012.0".
    const double d = number(field, module, column, row);
    if (d != std::floor(d)) {
      throw ParseError(std::string(module),
                       fmt::format("non-integer {} '{}', row {}", column, field, row));
    }
    return static_cast<long long>(d);
  }
  return v;
}

long long integer(std::string_view field, std::string_view module, std::string_view column,
                  std::size_t row) {
  if (auto v = optional_integer(field, module, column, row)) return *v;
  throw ParseError(std::string(module), fmt::format("missing {}, row {}", column, row));
}

std::string read_file(const std::string& path, std::string_view module) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(std::string(module), "file not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("io", "cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw DataError("io", "write failed: " + path);
}

}  // namespace windecomp::csv
