#include "windecomp/synth.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "windecomp/error.hpp"

namespace windecomp::synth {

namespace {

constexpr std::string_view kModule = "synth";

std::vector<double> axis(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

}  // namespace

double SplitMix64::normal() noexcept {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void SynthSpec::validate() const {
  if (n_turbines <= 0) throw ConfigError(std::string(kModule), "turbine count must be > 0");
  if (years.size() <= 0) throw ConfigError(std::string(kModule), "empty year range");
  if (n_lat == 0 || n_lon == 0) throw ConfigError(std::string(kModule), "grid shape must be positive");
  if (!(lon_min < lon_max) || !(lat_min < lat_max) || lon_min < -180 || lon_max > 180 || lat_min < -90 ||
      lat_max > 90) {
    throw ConfigError(std::string(kModule), "invalid bounding box");
  }
  if (n_lat == 1 || n_lon == 1) throw ConfigError(std::string(kModule), "grid needs at least 2x2 nodes");
  if (missing_share < 0.0 || missing_share > 1.0) {
    throw ConfigError(std::string(kModule), "missing share must be in [0, 1]");
  }
  if (specific_power < 0.0 || east_speedup < 0.0) {
    throw ConfigError(std::string(kModule), "specific power and speedup must be >= 0");
  }
  for (int k = 0; k < years.size(); ++k) {
    if (!(hub_height.at(k) > 0.0) || !(rotor_diameter.at(k) > 0.0)) {
      throw ConfigError(std::string(kModule), "hub height and rotor diameter trends must stay positive");
    }
  }
  const bool speeds_ok = std::visit(
      [](const auto& w) {
        using W = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<W, ConstantWind>) {
          return w.v10 >= 0.0 && w.v100 >= 0.0;
        } else if constexpr (std::is_same_v<W, SinusoidalWind>) {
          return w.mean >= 0.0 && w.amplitude >= 0.0 && w.period_hours > 0.0 && w.low_ratio >= 0.0;
        } else {
          return w.mean >= 0.0 && w.sd >= 0.0 && w.low_ratio >= 0.0;
        }
      },
      wind);
  if (!speeds_ok) throw ConfigError(std::string(kModule), "invalid wind model parameters");
}

std::string generate_fleet(const SynthSpec& spec, std::uint64_t seed) {
  spec.validate();
  SplitMix64 rng(seed);
  std::string out = "case_id,xlong,ylat,p_year,t_hh,t_rd,t_cap,is_decommissioned,d_year\n";
  const int n_years = spec.years.size();
  for (int i = 0; i < spec.n_turbines; ++i) {
    const int k = static_cast<int>(static_cast<long long>(i) * n_years / spec.n_turbines);
    const double lon = spec.lon_min + (spec.lon_max - spec.lon_min) * rng.uniform();
    const double lat = spec.lat_min + (spec.lat_max - spec.lat_min) * rng.uniform();
    const double hub = spec.hub_height.at(k);
    const double rd = spec.rotor_diameter.at(k);
    const double cap_kw = spec.specific_power * fleet::rotor_swept_area(rd) / 1000.0;
    auto field = [&](double v) { return rng.uniform() < spec.missing_share ? std::string() : format_number(v); };
    const auto hub_s = field(hub);
    const auto rd_s = field(rd);
    const auto cap_s = field(cap_kw);
    out += fmt::format("S{:06d},{},{},{},{},{},{},false,\n", i + 1, format_number(lon), format_number(lat),
                       spec.years.first + k, hub_s, rd_s, cap_s);
  }
  return out;
}

windgrid::WindGrid generate_windgrid(const SynthSpec& spec, std::uint64_t seed) {
  spec.validate();
  SplitMix64 rng(seed);
  auto lats = axis(spec.lat_min, spec.lat_max, spec.n_lat);
  auto lons = axis(spec.lon_min, spec.lon_max, spec.n_lon);
  const std::int64_t t0 = Period::whole_year(spec.years.first).start();
  const std::int64_t t_end = Period::whole_year(spec.years.last).end();
  const auto n_time = static_cast<std::size_t>((t_end - t0) / 3600);
  const std::size_t slice = spec.n_lat * spec.n_lon;

  std::array<std::vector<float>, 4> data;
  for (auto& arr : data) arr.resize(n_time * slice);
  auto& u10 = data[0];
  auto& v10 = data[1];
  auto& u100 = data[2];
  auto& v100 = data[3];

  for (std::size_t t = 0; t < n_time; ++t) {
    for (std::size_t j = 0; j < spec.n_lat; ++j) {
      for (std::size_t i = 0; i < spec.n_lon; ++i) {
        const std::size_t idx = t * slice + j * spec.n_lon + i;
        const double east = (lons[i] - spec.lon_min) / (spec.lon_max - spec.lon_min);
        const double scale = 1.0 + spec.east_speedup * east;
        double s10 = 0.0, s100 = 0.0, dir = 0.0;
        if (const auto* c = std::get_if<ConstantWind>(&spec.wind)) {
          s10 = c->v10;
          s100 = c->v100;
        } else if (const auto* s = std::get_if<SinusoidalWind>(&spec.wind)) {
          const double phase = 2.0 * std::numbers::pi * static_cast<double>(t) / s->period_hours;
          s100 = std::max(0.0, s->mean + s->amplitude * std::sin(phase));
          s10 = s->low_ratio * s100;
        } else {
          const auto& n = std::get<NoiseWind>(spec.wind);
          s100 = std::max(0.0, n.mean + n.sd * rng.normal());
          s10 = n.low_ratio * s100;
          dir = 2.0 * std::numbers::pi * rng.uniform();
        }
        s10 *= scale;
        s100 *= scale;
        const double cs = dir == 0.0 ? 1.0 : std::cos(dir);
        const double sn = dir == 0.0 ? 0.0 : std::sin(dir);
        u10[idx] = static_cast<float>(s10 * cs);
        v10[idx] = static_cast<float>(s10 * sn);
        u100[idx] = static_cast<float>(s100 * cs);
        v100[idx] = static_cast<float>(s100 * sn);
      }
    }
  }
  return windgrid::WindGrid(std::move(lats), std::move(lons), t0, 3600, n_time, std::move(data));
}

MonthlySeries generate_generation(const fleet::Fleet& fleet, const windgrid::WindGrid& grid,
                                  const LinearTrend& true_efficiency, YearRange years,
                                  const powerflux::PinSettings& settings) {
  powerflux::PinCalculator calc(grid, fleet, settings);
  const auto p_in = calc.monthly(years, powerflux::PinMode{});
  MonthlySeries out;
  out.start_year = years.first;
  out.start_month = 1;
  out.values.reserve(p_in.size());
  for (std::size_t i = 0; i < p_in.size(); ++i) {
    const int year = out.year_of(i);
    const double eff = true_efficiency.at(year - years.first);
    const auto hours = static_cast<double>(hours_in_month(year, out.month_of(i)));
    out.values.push_back(eff * p_in[i] * hours);
  }
  return out;
}

double brute_force_pin(const windgrid::WindGrid& grid, const fleet::Fleet& fleet, const Period& period,
                       const powerflux::PinMode& mode, YearRange study) {
  using powerflux::ClimateMode;
  using powerflux::HeightMode;
  using windgrid::Variable;

  const auto [lo, hi] = grid.time_indices(period);
  std::size_t span_lo = lo, span_hi = hi;
  if (mode.climate == ClimateMode::LongTermAverage) {
    span_lo = grid.time_indices(Period::whole_year(study.first)).first;
    span_hi = grid.time_indices(Period::whole_year(study.last)).second;
  }
  const std::uint64_t evaluations = static_cast<std::uint64_t>(span_hi - span_lo) * fleet.size();
  if (evaluations > kBruteForceLimit) {
    throw DataError(std::string(kModule), fmt::format("instance too large for brute force: {} evaluations", evaluations));
  }

  auto speed = [&](const fleet::TurbineRecord& t, std::size_t step) {
    const double h = mode.height == HeightMode::Hub ? *t.hub_height : mode.fixed_height;
    const double v10 = windgrid::speed_from_components(windgrid::bilinear(grid, Variable::U10, step, t.lon, t.lat),
                                                       windgrid::bilinear(grid, Variable::V10, step, t.lon, t.lat));
    const double v100 = windgrid::speed_from_components(windgrid::bilinear(grid, Variable::U100, step, t.lon, t.lat),
                                                        windgrid::bilinear(grid, Variable::V100, step, t.lon, t.lat));
    return windgrid::speed_at_height(v100, windgrid::shear_exponent(v10, v100).alpha, h);
  };

  double total = 0.0;
  if (mode.climate == ClimateMode::Actual) {
    for (std::size_t step = lo; step < hi; ++step) {
      for (const auto& t : fleet.turbines()) {
        const double area = fleet::rotor_swept_area(*t.rotor_diameter);
        total += fleet::operating_weight(t, period.year) * powerflux::kinetic_power(speed(t, step), area);
      }
    }
    return total / static_cast<double>(hi - lo);
  }
  for (const auto& t : fleet.turbines()) {
    const double area = fleet::rotor_swept_area(*t.rotor_diameter);
    double sum = 0.0;
    for (std::size_t step = span_lo; step < span_hi; ++step) sum += powerflux::kinetic_power(speed(t, step), area);
    total += fleet::operating_weight(t, period.year) * sum / static_cast<double>(span_hi - span_lo);
  }
  return total;
}

}  // namespace windecomp::synth
