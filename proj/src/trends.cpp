#include "windecomp/trends.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "windecomp/error.hpp"
#include "windecomp/summation.hpp"

namespace windecomp::trends {

namespace {

constexpr std::string_view kModule = "trends";

double mean(std::span<const double> v) { return compensated_sum(v) / static_cast<double>(v.size()); }

}  // namespace

OlsFit ols_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DataError(std::string(kModule), "x and y differ in length");
  if (xs.size() < 2) throw DataError(std::string(kModule), "at least two points are required");
  const double mx = mean(xs);
  const double my = mean(ys);
  CompensatedSum sxx, sxy, syy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx.add(dx * dx);
    sxy.add(dx * dy);
    syy.add(dy * dy);
  }
  if (sxx.value() == 0.0) throw DataError(std::string(kModule), "degenerate fit: all x values identical");

  OlsFit fit;
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  fit.residuals.reserve(xs.size());
  CompensatedSum ssr;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    // centred form keeps residuals small when x is a calendar year
    const double r = (ys[i] - my) - fit.slope * (xs[i] - mx);
    fit.residuals.push_back(r);
    ssr.add(r * r);
  }
  fit.r_squared = syy.value() == 0.0 ? 0.0 : std::clamp(1.0 - ssr.value() / syy.value(), 0.0, 1.0);
  return fit;
}

OlsFit trend_fit(const AnnualSeries& series) {
  std::vector<double> xs;
  for (int y : series.years()) xs.push_back(static_cast<double>(y));
  return ols_fit(xs, series.values());
}

double trend_slope(const AnnualSeries& series) { return trend_fit(series).slope; }

Counterfactual counterfactual_efficiency(const AnnualSeries& efficiency, const AnnualSeries& density) {
  require_aligned(kModule, efficiency, density);
  if (efficiency.size() < 3) throw DataError(std::string(kModule), "counterfactual needs at least 3 years");
  const auto& d = density.values();
  const double md = mean(d);
  const bool constant = std::all_of(d.begin(), d.end(), [&](double v) { return v == d.front(); });
  if (constant) {
    return Counterfactual{efficiency, 0.0, mean(efficiency.values()), md, true};
  }
  const auto fit = ols_fit(d, efficiency.values());
  const double me = mean(efficiency.values());
  std::vector<double> hat;
  hat.reserve(d.size());
  // Ê = a1·mean(D) + a0 + ε = mean(E) + ε, with ε computed in centred form
  for (std::size_t i = 0; i < d.size(); ++i) hat.push_back(me + fit.residuals[i]);
  return Counterfactual{AnnualSeries(efficiency.start_year(), std::move(hat), efficiency.unit()), fit.slope,
                        fit.intercept, md, false};
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DataError(std::string(kModule), "pearson needs two equal-length series of >= 2 points");
  }
  const double mx = mean(x);
  const double my = mean(y);
  CompensatedSum sxx, syy, sxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx.add((x[i] - mx) * (x[i] - mx));
    syy.add((y[i] - my) * (y[i] - my));
    sxy.add((x[i] - mx) * (y[i] - my));
  }
  if (sxx.value() == 0.0 || syy.value() == 0.0) {
    throw DomainError(std::string(kModule), "correlation undefined for a zero-variance series");
  }
  return std::clamp(sxy.value() / std::sqrt(sxx.value() * syy.value()), -1.0, 1.0);
}

}  // namespace windecomp::trends
