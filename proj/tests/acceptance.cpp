// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "fixture.hpp"
#include "helpers.hpp"
#include "windecomp/decomp.hpp"
#include "windecomp/pipeline.hpp"
#include "windecomp/powerflux.hpp"
#include "windecomp/synth.hpp"
#include "windecomp/trends.hpp"
#include "windecomp/validate.hpp"
#include "windecomp/windgrid.hpp"

using namespace windecomp;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double rel_err(double got, double want) {
  if (got == want) return 0.0;
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

pipeline::Aggregates fixture_aggregates(const synth::SynthSpec& spec, std::uint64_t seed, const std::string& name,
                                        unsigned workers = 1) {
  const auto dir = testing::scratch_dir(name);
  auto cfg = testing::write_fixture(spec, seed, dir);
  cfg.workers = workers;
  const auto loaded = pipeline::load_fleet(cfg);
  const auto grid = windgrid::load_windgrid(cfg.windgrid);
  const auto gen = powerflux::parse_generation_csv(csv::read_file(cfg.generation, "acceptance"));
  return pipeline::compute_power(loaded.fleet, grid, cfg, gen).aggregates;
}

Outcome constant_wind() {
  const auto t0 = Clock::now();
  synth::SynthSpec spec;
  spec.n_turbines = 100;
  spec.wind = synth::ConstantWind{8.0, 8.0};
  spec.rotor_diameter = {testing::diameter_for_area(1.0), 0.0};
  const auto dir = testing::scratch_dir("acc_constant");
  const auto cfg = testing::write_fixture(spec, 1, dir);
  const auto loaded = pipeline::load_fleet(cfg);
  const auto grid = windgrid::load_windgrid(cfg.windgrid);
  const auto agg = pipeline::compute_power(loaded.fleet, grid, cfg, std::nullopt).aggregates;
  powerflux::PinCalculator calc(grid, loaded.fleet, {spec.years});

  double worst = 0.0;
  using powerflux::ClimateMode;
  using powerflux::HeightMode;
  for (auto h : {HeightMode::Hub, HeightMode::Fixed}) {
    for (auto c : {ClimateMode::Actual, ClimateMode::LongTermAverage}) {
      const auto p = calc.annual(spec.years, {h, c});
      for (std::size_t i = 0; i < p.size(); ++i) worst = std::max(worst, rel_err(p[i] / agg.area[i], 313.6));
    }
  }
  const auto e = decomp::additive_pin_decomposition(agg.p_in, agg.p_in_avg, agg.p_in_ref_avg, agg.area,
                                                    spec.years.first);
  double effect = 0.0;
  for (const auto* s : {&e.new_locations, &e.hub_height, &e.annual_variation}) {
    for (double v : s->values()) effect = std::max(effect, std::abs(v) / e.baseline);
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && effect <= 1e-9 && secs < 5.0,
          fmt::format("max rel err {:.3g}, max effect/baseline {:.3g}, {:.2f} s", worst, effect, secs)};
}

Outcome multiplicative_identity() {
  synth::SplitMix64 rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> n, a, pin, pout;
    for (int i = 0; i < 10; ++i) {
      n.push_back(1 + 7e4 * rng.uniform());
      a.push_back(1 + 5e8 * rng.uniform());
      pin.push_back(1 + 3e11 * rng.uniform());
      pout.push_back(1 + 4e10 * rng.uniform());
    }
    const auto f = decomp::multiplicative_decomposition(AnnualSeries(2010, n, Unit::Count),
                                                        AnnualSeries(2010, a, Unit::SquareMeter),
                                                        AnnualSeries(2010, pin, Unit::Watt),
                                                        AnnualSeries(2010, pout, Unit::Watt));
    for (std::size_t i = 0; i < n.size(); ++i) {
      worst = std::max(worst, rel_err(f.n[i] * f.area_per_turbine[i] * f.input_density[i] * f.efficiency[i], pout[i]));
    }
  }
  return {worst <= 1e-12, fmt::format("max rel err {:.3g} over 100 instances", worst)};
}

Outcome telescoping_identity() {
  synth::SplitMix64 rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> pin, avg, ref, area;
    for (int i = 0; i < 10; ++i) {
      area.push_back(1e3 + 1e8 * rng.uniform());
      pin.push_back(area.back() * (100 + 400 * rng.uniform()));
      avg.push_back(area.back() * (100 + 400 * rng.uniform()));
      ref.push_back(area.back() * (100 + 400 * rng.uniform()));
    }
    const int base = 2010 + static_cast<int>(rng.uniform() * 10);
    const auto e = decomp::additive_pin_decomposition(
        AnnualSeries(2010, pin, Unit::Watt), AnnualSeries(2010, avg, Unit::Watt), AnnualSeries(2010, ref, Unit::Watt),
        AnnualSeries(2010, area, Unit::SquareMeter), base);
    for (std::size_t i = 0; i < pin.size(); ++i) {
      const double sum = e.baseline + e.new_locations[i] + e.hub_height[i] + e.annual_variation[i];
      worst = std::max(worst, rel_err(sum, pin[i] / area[i]));
    }
  }
  return {worst <= 1e-12, fmt::format("max rel err {:.3g} over 100 instances", worst)};
}

Outcome oracle_equivalence() {
  synth::SplitMix64 rng(4);
  double worst = 0.0;
  int checks = 0;
  for (int trial = 0; trial < 20; ++trial) {
    synth::SynthSpec spec;
    spec.years = {2011, 2011};
    spec.n_turbines = 1 + static_cast<int>(rng.uniform() * 10);
    spec.n_lat = 2 + static_cast<std::size_t>(rng.uniform() * 4);
    spec.n_lon = 2 + static_cast<std::size_t>(rng.uniform() * 4);
    spec.wind = synth::NoiseWind{6.0 + 4 * rng.uniform(), 2.0, 0.6 + 0.3 * rng.uniform()};
    spec.east_speedup = 0.3 * rng.uniform();
    spec.hub_height = {50.0 + 80 * rng.uniform(), 0.0};
    spec.rotor_diameter = {40.0 + 100 * rng.uniform(), 0.0};
    const auto seed = rng.next();
    const auto grid = synth::generate_windgrid(spec, seed);
    const auto fl = fleet::preprocess(fleet::parse_turbine_csv(synth::generate_fleet(spec, seed)), {});
    const auto month = Period::of_month(2011, 1 + static_cast<int>(rng.uniform() * 12));
    using powerflux::ClimateMode;
    using powerflux::HeightMode;
    for (auto h : {HeightMode::Hub, HeightMode::Fixed}) {
      for (auto c : {ClimateMode::Actual, ClimateMode::LongTermAverage}) {
        const powerflux::PinMode mode{h, c, 60.0 + 40 * rng.uniform()};
        const double fast = powerflux::aggregate_pin(grid, fl, month, mode, {spec.years});
        const double slow = synth::brute_force_pin(grid, fl, month, mode, spec.years);
        worst = std::max(worst, rel_err(fast, slow));
        ++checks;
      }
    }
  }
  return {worst <= 1e-9, fmt::format("max rel err {:.3g} over {} mode checks", worst, checks)};
}

Outcome shear_round_trip() {
  synth::SplitMix64 rng(5);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double v10 = 0.01 + 25 * rng.uniform();
    const double v100 = 0.01 + 25 * rng.uniform();
    const double alpha = windgrid::shear_exponent(v10, v100).alpha;
    worst = std::max(worst, rel_err(windgrid::speed_at_height(v100, alpha, 10.0), v10));
  }
  const double worked = windgrid::speed_at_height(10.0, windgrid::shear_exponent(5.0, 10.0).alpha, 50.0);
  return {worst <= 1e-12 && std::abs(worked - 8.1167) <= 1e-3,
          fmt::format("max rel err {:.3g}; (5, 10, h=50) -> {:.6f} m/s", worst, worked)};
}

Outcome counterfactual_contract() {
  synth::SynthSpec spec;
  spec.n_turbines = 60;
  spec.wind = synth::SinusoidalWind{8.0, 3.0, 24.0 * 365.25 / 3, 0.8};
  spec.true_efficiency = {0.30, -0.03 / 9.0};
  const auto agg = fixture_aggregates(spec, 6, "acc_counterfactual");
  std::vector<double> eff, dens;
  for (std::size_t i = 0; i < agg.p_in.size(); ++i) {
    eff.push_back((*agg.p_out)[i] / agg.p_in[i]);
    dens.push_back(agg.p_in[i] / agg.area[i]);
  }
  const AnnualSeries e(spec.years.first, eff, Unit::Dimensionless);
  const AnnualSeries d(spec.years.first, dens, Unit::WattPerSquareMeter);
  const double slope = trends::trend_slope(e);
  const bool slope_ok = std::abs(slope - (-0.03 / 9.0)) <= 1e-9;

  const auto cf = trends::counterfactual_efficiency(e, d);
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  const double mean_err = rel_err(mean(cf.efficiency.values()), mean(eff));

  synth::SplitMix64 rng(66);
  std::vector<double> noisy;
  for (int k = 0; k < 10; ++k) noisy.push_back(0.3 + 0.01 * rng.normal());
  const AnnualSeries en(2010, noisy, Unit::Dimensionless);
  const auto flat = trends::counterfactual_efficiency(en, AnnualSeries(2010, std::vector<double>(10, 321.0),
                                                                       Unit::WattPerSquareMeter));
  const bool fallback_ok = flat.degenerate && flat.efficiency.values() == noisy;

  return {slope_ok && mean_err <= 1e-12 && fallback_ok,
          fmt::format("slope {:.12f} (planted {:.12f}), mean rel err {:.3g}, constant fallback {}", slope,
                      -0.03 / 9.0, mean_err, fallback_ok ? "exact" : "differs")};
}

Outcome efficiency_recovery() {
  synth::SynthSpec spec;
  spec.n_turbines = 40;
  spec.years = {2010, 2014};
  spec.wind = synth::NoiseWind{};
  spec.east_speedup = 0.2;
  spec.hub_height = {75.0, 4.0};
  spec.true_efficiency = {0.3, 0.0};
  const auto agg = fixture_aggregates(spec, 7, "acc_efficiency");
  double worst = 0.0;
  for (std::size_t i = 0; i < agg.p_in.size(); ++i) {
    worst = std::max(worst, std::abs(powerflux::system_efficiency((*agg.p_out)[i], agg.p_in[i]) - 0.3));
  }
  return {worst <= 1e-9, fmt::format("max |E - 0.3| = {:.3g} over {} years", worst, agg.p_in.size())};
}

Outcome determinism() {
  synth::SynthSpec spec;
  spec.n_turbines = 80;
  spec.years = {2010, 2013};
  spec.wind = synth::NoiseWind{};
  spec.hub_height = {80.0, 2.0};
  spec.missing_share = 0.05;
  const auto dir = testing::scratch_dir("acc_determinism");
  auto cfg = testing::write_fixture(spec, 8, dir);
  std::vector<std::filesystem::path> outs;
  for (unsigned w : {1u, 8u}) {
    cfg.workers = w;
    const auto out = dir / fmt::format("out{}", w);
    pipeline::write_bundle(pipeline::run_pipeline(cfg), out.string());
    outs.push_back(out);
  }
  std::size_t compared = 0, differing = 0;
  for (const auto& entry : std::filesystem::directory_iterator(outs[0])) {
    const auto name = entry.path().filename();
    if (name != "report.json" && entry.path().extension() != ".svg") continue;
    ++compared;
    if (testing::slurp(entry.path()) != testing::slurp(outs[1] / name)) ++differing;
  }
  return {compared > 1 && differing == 0, fmt::format("{} files compared, {} differ", compared, differing)};
}

Outcome performance() {
  synth::SynthSpec spec;
  spec.n_turbines = 1000;
  spec.years = {2011, 2011};
  spec.n_lat = 8;
  spec.n_lon = 8;
  spec.wind = synth::NoiseWind{};
  spec.hub_height = {60.0, 0.0};
  spec.years = {2011, 2011};
  const auto grid = synth::generate_windgrid(spec, 9);
  synth::SynthSpec older = spec;
  older.years = {2000, 2000};  // commissioned before the study so every turbine counts all year
  auto records = fleet::parse_turbine_csv(synth::generate_fleet(older, 9));
  synth::SplitMix64 rng(9);
  for (auto& t : records) t.hub_height = 60.0 + 80 * rng.uniform();
  const auto fl = fleet::preprocess(records, {});

  auto timed = [&](unsigned workers) {
    const auto t0 = Clock::now();
    powerflux::PinCalculator calc(grid, fl, {spec.years, workers});
    const double p = calc.aggregate(Period::whole_year(2011), {});
    return std::pair{seconds_since(t0), p};
  };
  const auto [t1, p1] = timed(1);
  const auto [t4, p4] = timed(4);
  const double speedup = t1 / t4;
  const bool same = p1 == p4;
  return {t1 < 10.0 && speedup >= 2.0 && same,
          fmt::format("{} turbines x {} h: {:.2f} s at 1 worker, {:.2f} s at 4 workers, speedup {:.2f}x "
                      "(need >= 2x; {} hardware threads), results {}",
                      fl.size(), grid.n_time(), t1, t4, speedup, std::thread::hardware_concurrency(),
                      same ? "identical" : "differ")};
}

Outcome validation_algebra() {
  synth::SplitMix64 rng(10);
  std::vector<double> b;
  for (int i = 0; i < 10; ++i) b.push_back(1000 + 1e5 * rng.uniform());
  std::vector<double> a;
  for (double v : b) a.push_back(1.05 * v);
  const auto rd = validate::relative_difference(AnnualSeries(2010, a, Unit::Megawatt),
                                                AnnualSeries(2010, b, Unit::Megawatt));
  double rd_err = 0.0;
  for (double v : rd.values()) rd_err = std::max(rd_err, std::abs(v - 5.0));

  const YearRange yrs{1995, 2022};
  std::size_t violations = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<fleet::TurbineRecord> recs;
    const int n = 5 + static_cast<int>(rng.uniform() * 60);
    for (int i = 0; i < n; ++i) {
      recs.push_back(testing::make_turbine(fmt::format("T{}", i), 1990 + static_cast<int>(rng.uniform() * 32),
                                           -99.5, 40.5, 50 + 100 * rng.uniform(), 80.0,
                                           300 + 4000 * rng.uniform()));
    }
    const fleet::Fleet f(recs);
    for (int l = 40; l > 1; --l) {
      const auto longer = validate::scenario_capacity(f, yrs, {.lifetime_years = l});
      const auto shorter = validate::scenario_capacity(f, yrs, {.lifetime_years = l - 1});
      for (std::size_t i = 0; i < longer.size(); ++i) violations += shorter[i] > longer[i];
    }
  }
  // 1.05·b is rounded, so "exactly" means to the last few ulps of a percentage
  return {rd_err <= 1e-12 && violations == 0,
          fmt::format("max |rd - 5| = {:.3g} %, {} monotonicity violations on 50 fleets", rd_err, violations)};
}

Outcome ratio_of_averages() {
  synth::SplitMix64 rng(11);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a, b;
    const int n = 2 + static_cast<int>(rng.uniform() * 100);
    for (int i = 0; i < n; ++i) {
      a.push_back(1e-3 + 1e3 * rng.uniform());
      b.push_back(1e-3 + 1e3 * rng.uniform());
    }
    worst = std::max(worst, rel_err(powerflux::ratio_of_sums(a, b), powerflux::weighted_mean_of_ratios(a, b)));
  }
  const std::vector<double> fa{1, 4}, fb{1, 2};
  const double ros = powerflux::ratio_of_sums(fa, fb);
  const double mor = powerflux::mean_of_ratios(fa, fb);
  const bool fixture_ok = std::abs(ros - 5.0 / 3.0) <= 1e-12 && mor == 1.5;
  return {worst <= 1e-12 && fixture_ok,
          fmt::format("max rel err {:.3g}; fixture ratio of sums {:.4f} vs mean of ratios {:.4f}", worst, ros, mor)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"constant-wind closed form", constant_wind},
      {"multiplicative identity", multiplicative_identity},
      {"telescoping identity", telescoping_identity},
      {"brute-force oracle equivalence", oracle_equivalence},
      {"shear round trip", shear_round_trip},
      {"counterfactual contract", counterfactual_contract},
      {"efficiency recovery", efficiency_recovery},
      {"determinism across worker counts", determinism},
      {"performance", performance},
      {"validation algebra", validation_algebra},
      {"ratio of averages", ratio_of_averages},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    failed += !o.pass;
    fmt::print("criterion {:>2} {}: {} ({})\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
