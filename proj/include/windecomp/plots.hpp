#pragma once

#include <string>
#include <utility>
#include <vector>

#include "windecomp/decomp.hpp"
#include "windecomp/series.hpp"
#include "windecomp/svg.hpp"
#include "windecomp/trends.hpp"
#include "windecomp/validate.hpp"

namespace windecomp::plots {

using NamedSeries = std::pair<std::string, AnnualSeries>;

/// "trend 0.0 per year" style label.
std::string slope_label(double slope);

svg::Chart output_density(const AnnualSeries& density);
svg::Chart indexed_factors(const std::vector<NamedSeries>& indexed);
svg::Chart efficiency(const AnnualSeries& observed, const AnnualSeries& counterfactual);
svg::Chart additive_effects(const decomp::AdditiveEffects& effects);
svg::Chart waterfall(const std::vector<decomp::WaterfallSegment>& segments);
svg::Chart relative_difference(const std::vector<NamedSeries>& differences);
svg::Chart missingness(const std::vector<validate::MissingShares>& shares);
svg::Chart efficiency_vs_density(const std::vector<double>& density, const std::vector<double>& efficiency);
svg::Chart capacity_factor(const AnnualSeries& factors);

}  // namespace windecomp::plots
