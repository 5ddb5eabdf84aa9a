#include "windecomp/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "windecomp/error.hpp"

namespace windecomp::decomp {

namespace {

constexpr std::string_view kModule = "decomp";

double relative_error(double got, double want) {
  if (got == want) return 0.0;
  return std::fabs(got - want) / std::max(std::fabs(want), std::numeric_limits<double>::min());
}

void require_positive(const AnnualSeries& s, std::string_view what) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] > 0.0)) {
      throw DomainError(std::string(kModule),
                        fmt::format("{} is not positive in {}", what, s.start_year() + static_cast<int>(i)));
    }
  }
}

void add_rows(std::string& out, const AnnualSeries& s, std::string_view component) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += fmt::format("{},{},{},{}\n", s.start_year() + static_cast<int>(i), component, format_number(s[i]),
                       unit_symbol(s.unit()));
  }
}

}  // namespace

Factors multiplicative_decomposition(const AnnualSeries& n, const AnnualSeries& area,
                                     const AnnualSeries& p_in, const AnnualSeries& p_out) {
  require_aligned(kModule, n, area);
  require_aligned(kModule, n, p_in);
  require_aligned(kModule, n, p_out);
  require_positive(n, "turbine count");
  require_positive(area, "swept area");
  require_positive(p_in, "power input");

  std::vector<double> per_turbine, density, efficiency;
  double worst = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    per_turbine.push_back(area[i] / n[i]);
    density.push_back(p_in[i] / area[i]);
    efficiency.push_back(p_out[i] / p_in[i]);
    const double product = n[i] * per_turbine.back() * density.back() * efficiency.back();
    worst = std::max(worst, relative_error(product, p_out[i]));
  }
  const int y0 = n.start_year();
  return Factors{AnnualSeries(y0, n.values(), Unit::Count),
                 AnnualSeries(y0, std::move(per_turbine), Unit::SquareMeter),
                 AnnualSeries(y0, std::move(density), Unit::WattPerSquareMeter),
                 AnnualSeries(y0, std::move(efficiency), Unit::Dimensionless), worst};
}

AnnualSeries index_relative(const AnnualSeries& series, int base_year) {
  if (!series.has_year(base_year)) {
    throw DataError(std::string(kModule), fmt::format("base year {} not in series", base_year));
  }
  const double base = series.at_year(base_year);
  if (base == 0.0) throw DataError(std::string(kModule), fmt::format("base value in {} is zero", base_year));
  std::vector<double> out;
  out.reserve(series.size());
  for (double v : series.values()) out.push_back(v == base ? 100.0 : 100.0 * v / base);
  return AnnualSeries(series.start_year(), std::move(out), Unit::Percent);
}

AdditiveEffects additive_pin_decomposition(const AnnualSeries& p_in, const AnnualSeries& p_in_avg,
                                           const AnnualSeries& p_in_ref_avg, const AnnualSeries& area,
                                           int base_year, double reference_height) {
  require_aligned(kModule, p_in, p_in_avg);
  require_aligned(kModule, p_in, p_in_ref_avg);
  require_aligned(kModule, p_in, area);
  require_positive(area, "swept area");
  if (!p_in.has_year(base_year)) {
    throw DataError(std::string(kModule), fmt::format("base year {} not in series", base_year));
  }
  const auto b = static_cast<std::size_t>(base_year - p_in.start_year());
  const double baseline = p_in_ref_avg[b] / area[b];

  std::vector<double> loc, hub, ann, dens;
  double worst = 0.0;
  for (std::size_t i = 0; i < p_in.size(); ++i) {
    const double d_ref = p_in_ref_avg[i] / area[i];
    const double d_avg = p_in_avg[i] / area[i];
    const double d_in = p_in[i] / area[i];
    loc.push_back(d_ref - baseline);
    hub.push_back(d_avg - d_ref);
    ann.push_back(d_in - d_avg);
    dens.push_back(d_in);
    const double sum = baseline + loc.back() + hub.back() + ann.back();
    worst = std::max(worst, relative_error(sum, d_in));
  }
  const int y0 = p_in.start_year();
  return AdditiveEffects{base_year,
                         reference_height,
                         baseline,
                         AnnualSeries(y0, std::move(loc), Unit::WattPerSquareMeter),
                         AnnualSeries(y0, std::move(hub), Unit::WattPerSquareMeter),
                         AnnualSeries(y0, std::move(ann), Unit::WattPerSquareMeter),
                         AnnualSeries(y0, std::move(dens), Unit::WattPerSquareMeter),
                         worst};
}

std::vector<WaterfallSegment> waterfall(const AdditiveEffects& e) {
  std::vector<WaterfallSegment> out;
  for (std::size_t i = 0; i < e.input_density.size(); ++i) {
    const int year = e.input_density.start_year() + static_cast<int>(i);
    double level = e.baseline;
    out.push_back({year, "baseline", 0.0, level});
    const std::pair<const char*, double> steps[] = {{"new_locations", e.new_locations[i]},
                                                    {"hub_height", e.hub_height[i]},
                                                    {"annual_variation", e.annual_variation[i]}};
    for (const auto& [name, delta] : steps) {
      out.push_back({year, name, level, level + delta});
      level += delta;
    }
  }
  return out;
}

std::string factors_to_csv(const Factors& f, const AnnualSeries& p_out) {
  std::string out = "year,component,value,unit\n";
  add_rows(out, f.n, "n");
  add_rows(out, f.area_per_turbine, "area_per_turbine");
  add_rows(out, f.input_density, "input_density");
  add_rows(out, f.efficiency, "efficiency");
  add_rows(out, p_out, "p_out");
  return out;
}

std::string effects_to_csv(const AdditiveEffects& e) {
  std::string out = "year,component,value,unit\n";
  for (std::size_t i = 0; i < e.input_density.size(); ++i) {
    out += fmt::format("{},baseline,{},W/m2\n", e.input_density.start_year() + static_cast<int>(i),
                       format_number(e.baseline));
  }
  add_rows(out, e.new_locations, "new_locations");
  add_rows(out, e.hub_height, "hub_height");
  add_rows(out, e.annual_variation, "annual_variation");
  add_rows(out, e.input_density, "input_density");
  return out;
}

std::string waterfall_to_csv(const std::vector<WaterfallSegment>& segments) {
  std::string out = "year,component,bottom,top\n";
  for (const auto& s : segments) {
    out += fmt::format("{},{},{},{}\n", s.year, s.component, format_number(s.bottom), format_number(s.top));
  }
  return out;
}

}  // namespace windecomp::decomp
