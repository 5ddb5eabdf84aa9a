#pragma once

#include <span>
#include <vector>

#include "windecomp/series.hpp"

namespace windecomp::trends {

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> residuals;
  double r_squared = 0.0;  // 0 when y has no variance
};

/// Least-squares line y = slope·x + intercept. Needs two distinct x values.
OlsFit ols_fit(std::span<const double> xs, std::span<const double> ys);

/// OLS slope against calendar year, in series units per year.
double trend_slope(const AnnualSeries& series);
OlsFit trend_fit(const AnnualSeries& series);

struct Counterfactual {
  AnnualSeries efficiency;   // Ê
  double slope_on_density;   // fitted dE/dD_in
  double intercept;
  double mean_density;       // mean D_in
  bool degenerate = false;   // D_in constant: Ê = E
};

/**
 * Efficiency with input power density held at its mean.
 *
 * Fits E = a1·D_in + a0 + ε and returns Ê(t) = a1·mean(D_in) + a0 + ε(t),
 * i.e. the observed series with the density-driven component removed.
 */
Counterfactual counterfactual_efficiency(const AnnualSeries& efficiency, const AnnualSeries& density);

/// Pearson correlation; throws DomainError when either input has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace windecomp::trends
