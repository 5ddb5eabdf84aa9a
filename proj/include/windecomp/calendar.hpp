#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace windecomp {

/// Inclusive range of calendar years.
struct YearRange {
  int first = 0;
  int last = 0;

  int size() const noexcept { return last - first + 1; }
  bool contains(int y) const noexcept { return y >= first && y <= last; }
  std::vector<int> years() const;
};

/// A calendar year, or a single month of it when `month` is set (1..12).
struct Period {
  int year = 0;
  std::optional<int> month;

  static Period whole_year(int y) { return Period{y, std::nullopt}; }
  static Period of_month(int y, int m) { return Period{y, m}; }

  /// Unix seconds (UTC) of the first instant of the period.
  std::int64_t start() const;
  /// Unix seconds (UTC) one past the last instant.
  std::int64_t end() const;
  /// Exact number of hours, leap years included.
  std::int64_t hours() const { return (end() - start()) / 3600; }

  std::string label() const;
  friend bool operator==(const Period&, const Period&) = default;
};

std::int64_t unix_seconds(int year, int month, int day);
bool is_leap_year(int year) noexcept;
std::int64_t hours_in_year(int year);
std::int64_t hours_in_month(int year, int month);

}  // namespace windecomp
