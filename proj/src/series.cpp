#include "windecomp/series.hpp"

#include <array>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "windecomp/error.hpp"

namespace windecomp {

namespace {
constexpr std::array<std::pair<Unit, std::string_view>, 8> kUnits{{
    {Unit::Watt, "W"},
    {Unit::SquareMeter, "m2"},
    {Unit::Count, "count"},
    {Unit::WattPerSquareMeter, "W/m2"},
    {Unit::Dimensionless, "1"},
    {Unit::Megawatt, "MW"},
    {Unit::Percent, "%"},
    {Unit::GigawattHour, "GWh"},
}};
}  // namespace

std::string_view unit_symbol(Unit u) noexcept {
  for (const auto& [unit, sym] : kUnits) {
    if (unit == u) return sym;
  }
  return "?";
}

Unit parse_unit(std::string_view symbol) {
  for (const auto& [unit, sym] : kUnits) {
    if (sym == symbol) return unit;
  }
  throw ParseError("series", fmt::format("unknown unit '{}'", symbol));
}

AnnualSeries::AnnualSeries(int start_year, std::vector<double> values, Unit unit)
    : start_year_(start_year), values_(std::move(values)), unit_(unit) {
  if (values_.empty()) throw DataError("series", "annual series must not be empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DataError("series", fmt::format("non-finite value in year {}", start_year_ + static_cast<int>(i)));
    }
  }
}

double AnnualSeries::at_year(int year) const {
  if (!has_year(year)) throw DataError("series", fmt::format("year {} not in series", year));
  return values_[static_cast<std::size_t>(year - start_year_)];
}

std::vector<int> AnnualSeries::years() const {
  std::vector<int> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = start_year_ + static_cast<int>(i);
  return out;
}

void require_aligned(std::string_view module, const AnnualSeries& a, const AnnualSeries& b) {
  if (!a.aligned_with(b)) {
    throw DataError(std::string(module),
                    fmt::format("misaligned years: {}-{} vs {}-{}", a.start_year(), a.end_year(),
                                b.start_year(), b.end_year()));
  }
}

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  return fmt::format("{:.17g}", v);
}

std::string series_to_csv(const AnnualSeries& s) {
  std::string out = "year,value,unit\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += fmt::format("{},{},{}\n", s.start_year() + static_cast<int>(i), format_number(s[i]),
                       unit_symbol(s.unit()));
  }
  return out;
}

long MonthlySeries::index_of(int year, int month) const noexcept {
  const long idx = (static_cast<long>(year) - start_year) * 12 + (month - start_month);
  if (idx < 0 || idx >= static_cast<long>(values.size())) return -1;
  return idx;
}

int MonthlySeries::year_of(std::size_t i) const noexcept {
  return start_year + static_cast<int>((start_month - 1 + static_cast<long>(i)) / 12);
}

int MonthlySeries::month_of(std::size_t i) const noexcept {
  return static_cast<int>((start_month - 1 + static_cast<long>(i)) % 12) + 1;
}

}  // namespace windecomp
