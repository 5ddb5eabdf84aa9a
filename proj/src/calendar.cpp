#include "windecomp/calendar.hpp"

#include <chrono>

#include <fmt/format.h>

#include "windecomp/error.hpp"

namespace windecomp {

std::vector<int> YearRange::years() const {
  std::vector<int> out;
  for (int y = first; y <= last; ++y) out.push_back(y);
  return out;
}

std::int64_t unix_seconds(int year, int month, int day) {
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) {
    throw DomainError("calendar", fmt::format("invalid date {}-{}-{}", year, month, day));
  }
  return duration_cast<seconds>(sys_days{ymd}.time_since_epoch()).count();
}

bool is_leap_year(int year) noexcept { return std::chrono::year{year}.is_leap(); }

std::int64_t hours_in_year(int year) { return Period::whole_year(year).hours(); }

std::int64_t hours_in_month(int year, int month) { return Period::of_month(year, month).hours(); }

std::int64_t Period::start() const { return unix_seconds(year, month.value_or(1), 1); }

std::int64_t Period::end() const {
  if (!month) return unix_seconds(year + 1, 1, 1);
  if (*month == 12) return unix_seconds(year + 1, 1, 1);
  return unix_seconds(year, *month + 1, 1);
}

std::string Period::label() const {
  if (month) return fmt::format("{:04d}-{:02d}", year, *month);
  return fmt::format("{:04d}", year);
}

}  // namespace windecomp
