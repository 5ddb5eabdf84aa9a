#include "windecomp/plots.hpp"

#include <cmath>

#include <fmt/format.h>

namespace windecomp::plots {

namespace {

std::vector<double> year_axis(const AnnualSeries& s) {
  std::vector<double> x;
  for (int y : s.years()) x.push_back(static_cast<double>(y));
  return x;
}

svg::Series line(std::string name, const AnnualSeries& s, svg::Style style = svg::Style::Line) {
  return svg::Series{std::move(name), style, year_axis(s), s.values(), {}};
}

}  // namespace

std::string slope_label(double slope) {
  if (std::fabs(slope) < 1e-12) return "trend 0.0 per year";
  if (std::fabs(slope) >= 0.1) return fmt::format("trend {:.1f} per year", slope);
  return fmt::format("trend {:.3g} per year", slope);
}

svg::Chart output_density(const AnnualSeries& density) {
  svg::Chart c{"Output power density", "year", "W/m2", {}, {}};
  c.series.push_back(line("output power density", density));
  if (density.size() >= 2) {
    const auto fit = trends::trend_fit(density);
    std::vector<double> fitted;
    for (int y : density.years()) fitted.push_back(fit.intercept + fit.slope * y);
    c.series.push_back(svg::Series{"linear trend", svg::Style::Dashed, year_axis(density), std::move(fitted), {}});
    c.notes.push_back(slope_label(fit.slope));
  }
  return c;
}

svg::Chart indexed_factors(const std::vector<NamedSeries>& indexed) {
  svg::Chart c{"Factors relative to base year", "year", "%", {}, {}};
  for (const auto& [name, s] : indexed) c.series.push_back(line(name, s));
  return c;
}

svg::Chart efficiency(const AnnualSeries& observed, const AnnualSeries& counterfactual) {
  svg::Chart c{"System efficiency", "year", "P_out / P_in", {}, {}};
  c.series.push_back(line("system efficiency", observed));
  c.series.push_back(line("constant input power density", counterfactual, svg::Style::Dashed));
  if (observed.size() >= 2) c.notes.push_back(slope_label(trends::trend_slope(observed)));
  return c;
}

svg::Chart additive_effects(const decomp::AdditiveEffects& e) {
  svg::Chart c{"Input power density effects", "year", "W/m2", {}, {}};
  c.series.push_back(line("new locations", e.new_locations, svg::Style::Bars));
  c.series.push_back(line("hub height", e.hub_height, svg::Style::Bars));
  c.series.push_back(line("annual variation", e.annual_variation, svg::Style::Bars));
  c.notes.push_back(fmt::format("baseline {:.4g} W/m2 ({}), reference height {:g} m", e.baseline, e.base_year,
                                e.reference_height));
  return c;
}

svg::Chart waterfall(const std::vector<decomp::WaterfallSegment>& segments) {
  svg::Chart c{"Input power density decomposition", "year", "W/m2", {}, {}};
  for (const char* name : {"baseline", "new_locations", "hub_height", "annual_variation"}) {
    svg::Series s{name, svg::Style::Bars, {}, {}, {}};
    for (const auto& seg : segments) {
      if (seg.component != name) continue;
      s.x.push_back(seg.year);
      s.y.push_back(seg.top);
      s.y0.push_back(seg.bottom);
    }
    if (!s.x.empty()) c.series.push_back(std::move(s));
  }
  return c;
}

svg::Chart relative_difference(const std::vector<NamedSeries>& differences) {
  svg::Chart c{"Relative difference to reference statistics", "year", "%", {}, {}};
  for (const auto& [name, s] : differences) c.series.push_back(line(name, s));
  return c;
}

svg::Chart missingness(const std::vector<validate::MissingShares>& shares) {
  svg::Chart c{"Share of operating turbines with missing parameters", "year", "share", {}, {}};
  svg::Series hh{"hub height", svg::Style::Line, {}, {}, {}};
  svg::Series rd{"rotor diameter", svg::Style::Line, {}, {}, {}};
  svg::Series cap{"capacity", svg::Style::Line, {}, {}, {}};
  for (const auto& s : shares) {
    const double x = s.year;
    hh.x.push_back(x);
    hh.y.push_back(s.hub_height);
    rd.x.push_back(x);
    rd.y.push_back(s.rotor_diameter);
    cap.x.push_back(x);
    cap.y.push_back(s.capacity);
  }
  if (!shares.empty()) c.series = {std::move(hh), std::move(rd), std::move(cap)};
  return c;
}

svg::Chart efficiency_vs_density(const std::vector<double>& density, const std::vector<double>& efficiency) {
  svg::Chart c{"Monthly system efficiency vs input power density", "input power density (W/m2)",
               "system efficiency", {}, {}};
  if (!density.empty()) c.series.push_back(svg::Series{"months", svg::Style::Points, density, efficiency, {}});
  return c;
}

svg::Chart capacity_factor(const AnnualSeries& factors) {
  svg::Chart c{"Capacity factor", "year", "P_out / capacity", {}, {}};
  c.series.push_back(line("capacity factor", factors));
  return c;
}

}  // namespace windecomp::plots
