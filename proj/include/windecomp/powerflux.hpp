#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <tuple>
#include <vector>

#include "windecomp/calendar.hpp"
#include "windecomp/diagnostics.hpp"
#include "windecomp/fleet.hpp"
#include "windecomp/series.hpp"
#include "windecomp/summation.hpp"
#include "windecomp/windgrid.hpp"

namespace windecomp::powerflux {

/// Air density, kg/m³.
inline constexpr double kAirDensity = 1.225;
/// Betz limit 16/27.
inline constexpr double kBetzLimit = 16.0 / 27.0;
/// Default reference height for the fixed-height mode, m.
inline constexpr double kReferenceHeight = 76.0;

/// Kinetic power ½ρAv³ in W.
double kinetic_power(double v, double area);

enum class HeightMode { Hub, Fixed };
enum class ClimateMode { Actual, LongTermAverage };

struct PinMode {
  HeightMode height = HeightMode::Hub;
  ClimateMode climate = ClimateMode::Actual;
  double fixed_height = kReferenceHeight;  // used when height == Fixed
};

struct PinSettings {
  /// Span over which long-term averages of v³ are taken.
  YearRange study{2010, 2019};
  unsigned workers = 1;
};

/**
 * Sums of hourly input power over turbine locations.
 *
 * Per-turbine sums of v³ are computed per calendar month and cached per
 * height profile, so annual, monthly and long-term-average queries share one
 * pass over the grid. Work is split across `workers` threads by turbine; each
 * turbine's accumulation order is fixed, so results do not depend on the
 * worker count.
 */
class PinCalculator {
 public:
  /// Throws DataError listing turbines that fall outside the grid.
  PinCalculator(const windgrid::WindGrid& grid, const fleet::Fleet& fleet, PinSettings settings = {});

  /// Mean over the period's hours of the weighted sum over turbines, W.
  double aggregate(const Period& period, const PinMode& mode);
  AnnualSeries annual(YearRange years, const PinMode& mode);
  /// One value per month of `years`, W.
  std::vector<double> monthly(YearRange years, const PinMode& mode);

  /// Number of (turbine, hour) evaluations where a calm 10 m or 100 m speed
  /// forced the shear exponent to 0.
  std::uint64_t calm_events() const noexcept { return calm_events_; }
  const PinSettings& settings() const noexcept { return settings_; }

 private:
  struct MonthSums {
    std::size_t steps = 0;
    std::vector<CompensatedSum> per_turbine;
  };
  using HeightKey = double;  // < 0 means hub height
  using Cache = std::map<std::pair<int, int>, MonthSums>;

  Cache& cache_for(const PinMode& mode);
  void ensure_months(const PinMode& mode, std::span<const Period> months);
  const std::vector<double>& long_term_mean(const PinMode& mode);
  double weighted_total(int year, std::span<const double> per_turbine_v3) const;

  const windgrid::WindGrid& grid_;
  const fleet::Fleet& fleet_;
  PinSettings settings_;
  std::vector<windgrid::CellWeights> cells_;
  std::vector<double> kinetic_factor_;  // ½ρA per turbine
  std::map<HeightKey, Cache> cache_;
  std::map<HeightKey, std::vector<double>> long_term_;
  std::uint64_t calm_events_ = 0;
};

/// One-shot convenience wrapper around PinCalculator.
double aggregate_pin(const windgrid::WindGrid& grid, const fleet::Fleet& fleet, const Period& period,
                     const PinMode& mode, const PinSettings& settings = {});

// -- generation --------------------------------------------------------------

/// Parses `year,month,net_generation_mwh` into a dense monthly series in Wh.
MonthlySeries parse_generation_csv(std::string_view text);
std::string generation_to_csv(const MonthlySeries& energy_wh);

/// Average generated power over the period, W.
double pout(const MonthlySeries& energy_wh, const Period& period);
AnnualSeries pout_series(const MonthlySeries& energy_wh, YearRange years);

// -- ratios ------------------------------------------------------------------

double input_power_density(double p_in, double area);
double output_power_density(double p_out, double area);
/// P_out / P_in. Results above the Betz limit are reported to `diag`.
double system_efficiency(double p_out, double p_in, Diagnostics* diag = nullptr);
double capacity_factor(double p_out, double capacity);

/// Σa / Σb: what every efficiency in the pipeline is.
double ratio_of_sums(std::span<const double> a, std::span<const double> b);
/// (1/n) Σ (b_i / mean b) · (a_i / b_i).
double weighted_mean_of_ratios(std::span<const double> a, std::span<const double> b);
/// (1/n) Σ a_i / b_i.
double mean_of_ratios(std::span<const double> a, std::span<const double> b);

}  // namespace windecomp::powerflux
