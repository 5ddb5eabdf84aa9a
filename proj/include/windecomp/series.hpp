#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace windecomp {

enum class Unit { Watt, SquareMeter, Count, WattPerSquareMeter, Dimensionless, Megawatt, Percent, GigawattHour };

std::string_view unit_symbol(Unit u) noexcept;
/// Inverse of unit_symbol; throws ParseError for unknown symbols.
Unit parse_unit(std::string_view symbol);

/**
 * Year-indexed sequence of finite scalars.
 *
 * Values are contiguous from `start_year`. Construction validates the
 * invariants (non-empty, finite).
 */
class AnnualSeries {
 public:
  AnnualSeries(int start_year, std::vector<double> values, Unit unit);

  int start_year() const noexcept { return start_year_; }
  int end_year() const noexcept { return start_year_ + static_cast<int>(values_.size()) - 1; }
  std::size_t size() const noexcept { return values_.size(); }
  Unit unit() const noexcept { return unit_; }
  const std::vector<double>& values() const noexcept { return values_; }

  bool has_year(int year) const noexcept { return year >= start_year_ && year <= end_year(); }
  double at_year(int year) const;
  double operator[](std::size_t i) const { return values_[i]; }
  std::vector<int> years() const;

  bool aligned_with(const AnnualSeries& other) const noexcept {
    return start_year_ == other.start_year_ && values_.size() == other.values_.size();
  }

 private:
  int start_year_;
  std::vector<double> values_;
  Unit unit_;
};

/// Throws DataError naming `module` unless all series cover the same years.
void require_aligned(std::string_view module, const AnnualSeries& a, const AnnualSeries& b);

/// CSV with header `year,value,unit`.
std::string series_to_csv(const AnnualSeries& s);

/// Round-trip formatting used for every numeric value written to text outputs.
std::string format_number(double v);

/// Month-indexed dense series (energy in Wh internally).
struct MonthlySeries {
  int start_year = 0;
  int start_month = 1;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  /// Index of (year, month) or -1 when outside the covered span.
  long index_of(int year, int month) const noexcept;
  int year_of(std::size_t i) const noexcept;
  int month_of(std::size_t i) const noexcept;
};

}  // namespace windecomp
