#include <doctest.h>

#include <numeric>

#include "windecomp/error.hpp"
#include "windecomp/synth.hpp"
#include "windecomp/trends.hpp"

using namespace windecomp;
using namespace windecomp::trends;

namespace {

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

// Slope from the raw normal equations in long double; independent of the centred implementation.
long double normal_equation_slope(const std::vector<double>& x, const std::vector<double>& y) {
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<long double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("ols_fit") {
  const std::vector<double> x{2010, 2011, 2012}, y{1, 2, 3};
  const auto f = ols_fit(x, y);
  CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(-2009.0).epsilon(1e-14));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-14));

  const auto c = ols_fit(x, std::vector<double>{4, 4, 4});
  CHECK(c.slope == 0.0);
  CHECK(c.intercept == 4.0);
  CHECK(c.r_squared == 0.0);

  CHECK_THROWS_WITH_AS(ols_fit(std::vector<double>{1}, std::vector<double>{1}), doctest::Contains("at least two"),
                       DataError);
  CHECK_THROWS_WITH_AS(ols_fit(std::vector<double>{1, 1}, std::vector<double>{1, 2}), doctest::Contains("degenerate"),
                       DataError);
}

TEST_CASE("ols residuals are orthogonal to x") {
  synth::SplitMix64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x, y;
    for (int i = 0; i < 12; ++i) {
      x.push_back(100 * rng.uniform());
      y.push_back(3 - 0.2 * x.back() + rng.normal());
    }
    const auto f = ols_fit(x, y);
    const double mx = mean(x);
    double dot = 0, scale = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      dot += (x[i] - mx) * f.residuals[i];
      scale += std::abs(x[i] - mx) * std::abs(y[i]);
    }
    CHECK(std::abs(dot) <= 1e-10 * scale);
    CHECK(f.slope == doctest::Approx(static_cast<double>(normal_equation_slope(x, y))).epsilon(1e-10));
    CHECK(f.r_squared >= 0.0);
    CHECK(f.r_squared <= 1.0);
  }
}

TEST_CASE("trend_slope") {
  CHECK(trend_slope(AnnualSeries(2010, {1.0, 0.9, 0.8, 0.7}, Unit::Dimensionless)) ==
        doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(trend_slope(AnnualSeries(2010, {5, 5, 5}, Unit::Dimensionless)) == 0.0);
  std::vector<double> v;
  for (int k = 0; k < 10; ++k) v.push_back(2.0 * k);
  CHECK(trend_slope(AnnualSeries(2010, v, Unit::Dimensionless)) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("counterfactual efficiency") {
  const AnnualSeries e(2010, {0.30, 0.31, 0.29, 0.32}, Unit::Dimensionless);
  SUBCASE("constant density returns E") {
    const auto c = counterfactual_efficiency(e, AnnualSeries(2010, {300, 300, 300, 300}, Unit::WattPerSquareMeter));
    CHECK(c.degenerate);
    CHECK(c.efficiency.values() == e.values());
  }
  SUBCASE("perfectly explained variation") {
    const AnnualSeries d(2010, {100, 200, 300, 400}, Unit::WattPerSquareMeter);
    const AnnualSeries lin(2010, {0.4 - 0.0001 * 100, 0.4 - 0.0001 * 200, 0.4 - 0.0001 * 300, 0.4 - 0.0001 * 400},
                           Unit::Dimensionless);
    const auto c = counterfactual_efficiency(lin, d);
    for (double v : c.efficiency.values()) CHECK(v == doctest::Approx(mean(lin.values())).epsilon(1e-12));
  }
  SUBCASE("density effect removed, trend kept") {
    synth::SplitMix64 rng(41);
    std::vector<double> d, ev;
    for (int k = 0; k < 10; ++k) {
      d.push_back(250 + 60 * rng.uniform());
      ev.push_back(0.4 - 0.001 * d.back() - 0.002 * k);
    }
    const auto c = counterfactual_efficiency(AnnualSeries(2010, ev, Unit::Dimensionless),
                                             AnnualSeries(2010, d, Unit::WattPerSquareMeter));
    CHECK(c.slope_on_density == doctest::Approx(static_cast<double>(normal_equation_slope(d, ev))).epsilon(1e-9));
    CHECK(mean(c.efficiency.values()) == doctest::Approx(mean(ev)).epsilon(1e-12));
    for (std::size_t k = 0; k < ev.size(); ++k) {
      const double expected = ev[k] - c.slope_on_density * (d[k] - mean(d));
      CHECK(c.efficiency[k] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  SUBCASE("too short") {
    CHECK_THROWS(counterfactual_efficiency(AnnualSeries(2010, {0.3, 0.3}, Unit::Dimensionless),
                                           AnnualSeries(2010, {1, 2}, Unit::Dimensionless)));
  }
}

TEST_CASE("pearson") {
  const std::vector<double> x{1, 2, 4, 7}, neg{-1, -2, -4, -7};
  CHECK(pearson(x, x) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pearson(x, neg) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK_THROWS_AS(pearson(x, std::vector<double>{2, 2, 2, 2}), DomainError);

  const std::vector<double> y{3, 1, 4, 1.5};
  std::vector<double> xt;
  for (double v : x) xt.push_back(5 + 3 * v);
  CHECK(pearson(xt, y) == doctest::Approx(pearson(x, y)).epsilon(1e-12));
  std::vector<double> yn;
  for (double v : y) yn.push_back(-v);
  CHECK(pearson(x, yn) == doctest::Approx(-pearson(x, y)).epsilon(1e-12));
}
