#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "windecomp/calendar.hpp"
#include "windecomp/fleet.hpp"
#include "windecomp/powerflux.hpp"
#include "windecomp/series.hpp"
#include "windecomp/windgrid.hpp"

namespace windecomp::synth {

/**
 * SplitMix64 (Steele, Lea & Flood 2014).
 *
 *   state += 0x9E3779B97F4A7C15
 *   z = state
 *   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
 *   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
 *   return z ^ (z >> 31)
 *
 * Doubles take the top 53 bits: (z >> 11) · 2⁻⁵³. Normal deviates use the
 * Box–Muller cosine branch on two consecutive uniforms. Fixed here so
 * fixtures are identical on every platform.
 */
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, 1).
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double normal() noexcept;

 private:
  std::uint64_t state_;
};

/// Same wind speed everywhere and always; direction due east.
struct ConstantWind {
  double v10 = 8.0;
  double v100 = 8.0;
};

/// 100 m speed mean + amplitude·sin(2πt/period), floored at 0; 10 m speed is
/// `low_ratio` times that.
struct SinusoidalWind {
  double mean = 8.0;
  double amplitude = 2.0;
  double period_hours = 24.0;
  double low_ratio = 0.8;
};

/// Independent normal speed per cell and hour (floored at 0) with a random direction.
struct NoiseWind {
  double mean = 8.0;
  double sd = 2.0;
  double low_ratio = 0.8;
};

using WindModel = std::variant<ConstantWind, SinusoidalWind, NoiseWind>;

struct LinearTrend {
  double start = 0.0;
  double per_year = 0.0;
  double at(int years_since_start) const noexcept { return start + per_year * years_since_start; }
};

struct SynthSpec {
  int n_turbines = 100;
  YearRange years{2010, 2019};
  std::size_t n_lat = 4;
  std::size_t n_lon = 4;
  double lon_min = -100.0, lon_max = -99.0;
  double lat_min = 40.0, lat_max = 41.0;
  WindModel wind = ConstantWind{};
  /// Relative speed increase from the western to the eastern edge of the box.
  double east_speedup = 0.0;
  LinearTrend hub_height{80.0, 0.0};
  LinearTrend rotor_diameter{100.0, 0.0};
  double specific_power = 300.0;  // W/m², sets capacity from swept area
  LinearTrend true_efficiency{0.3, 0.0};
  /// Probability that each of hub height, rotor diameter and capacity is left blank.
  double missing_share = 0.0;

  void validate() const;
};

/// Registry CSV; turbines are spread evenly over the years in id order.
std::string generate_fleet(const SynthSpec& spec, std::uint64_t seed);

/// Hourly grid covering `spec.years` exactly.
windgrid::WindGrid generate_windgrid(const SynthSpec& spec, std::uint64_t seed);

/// Monthly energy (Wh) such that P_out = efficiency(year) · P_in (hub height, actual climate).
MonthlySeries generate_generation(const fleet::Fleet& fleet, const windgrid::WindGrid& grid,
                                  const LinearTrend& true_efficiency, YearRange years,
                                  const powerflux::PinSettings& settings = {});

/// Upper bound on point evaluations accepted by brute_force_pin.
inline constexpr std::uint64_t kBruteForceLimit = 10'000'000;

/**
 * Direct evaluation of mean-over-hours, sum-over-turbines kinetic power.
 *
 * Plain loops and plain summation through the public point operations; used
 * as the reference for PinCalculator.
 */
double brute_force_pin(const windgrid::WindGrid& grid, const fleet::Fleet& fleet, const Period& period,
                       const powerflux::PinMode& mode, YearRange study = {2010, 2019});

}  // namespace windecomp::synth
