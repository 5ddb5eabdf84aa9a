#pragma once

#include <optional>
#include <string>
#include <vector>

#include "windecomp/series.hpp"

namespace windecomp::decomp {

/// P_out = N · (A/N) · (P_in/A) · (P_out/P_in), one value per year.
struct Factors {
  AnnualSeries n;
  AnnualSeries area_per_turbine;  // m²
  AnnualSeries input_density;     // W/m²
  AnnualSeries efficiency;
  /// Largest relative deviation of the factor product from P_out.
  double max_identity_error = 0.0;
};

/// Additive split of input power density into a constant baseline and three effects (W/m²).
struct AdditiveEffects {
  int base_year = 0;
  double reference_height = 76.0;
  double baseline = 0.0;
  AnnualSeries new_locations;
  AnnualSeries hub_height;
  AnnualSeries annual_variation;
  AnnualSeries input_density;  // P_in / A
  double max_identity_error = 0.0;
};

struct DecompositionResult {
  Factors factors;
  std::vector<AnnualSeries> indexed_factors;  // n, area/n, density, efficiency, P_out in % of base
  std::optional<AdditiveEffects> additive;
};

/// Throws DataError on misaligned years and DomainError naming the year of a
/// non-positive N, A or P_in.
Factors multiplicative_decomposition(const AnnualSeries& n, const AnnualSeries& area,
                                     const AnnualSeries& p_in, const AnnualSeries& p_out);

/// 100 · value(t) / value(base_year).
AnnualSeries index_relative(const AnnualSeries& series, int base_year);

/**
 * Splits P_in/A into baseline + new-location, hub-height and annual-variation
 * effects.
 *
 * `p_in_avg` is input power at hub height under long-term-average climate;
 * `p_in_ref_avg` the same at the fixed reference height. The baseline is the
 * reference-height density of `base_year`, so the new-location effect vanishes
 * there.
 */
AdditiveEffects additive_pin_decomposition(const AnnualSeries& p_in, const AnnualSeries& p_in_avg,
                                           const AnnualSeries& p_in_ref_avg, const AnnualSeries& area,
                                           int base_year, double reference_height = 76.0);

/// One stacked segment of the waterfall chart.
struct WaterfallSegment {
  int year;
  std::string component;
  double bottom;
  double top;
};

/// Segments per year: baseline bar, then each effect stacked on the running total.
std::vector<WaterfallSegment> waterfall(const AdditiveEffects& effects);

/// Tidy CSV `year,component,value,unit`.
std::string factors_to_csv(const Factors& f, const AnnualSeries& p_out);
std::string effects_to_csv(const AdditiveEffects& e);
std::string waterfall_to_csv(const std::vector<WaterfallSegment>& segments);

}  // namespace windecomp::decomp
