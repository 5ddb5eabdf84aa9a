#include "windecomp/powerflux.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "windecomp/csv.hpp"
#include "windecomp/error.hpp"

namespace windecomp::powerflux {

namespace {

constexpr std::string_view kModule = "powerflux";
constexpr double kWhPerMWh = 1.0e6;

using windgrid::Variable;

struct Site {
  windgrid::CellWeights cell;
  double height_exponent;  // log10(h / 100 m)
};

struct TimeBlock {
  std::size_t lo;
  std::size_t hi;
};

// v³ at height for one site and one step. The power law is folded into
// v_h = v100 · (v100/v10)^log10(h/100), which is the same expression as
// v100 · (h/100)^α with α = log10(v100/v10).
inline double hub_v3(const windgrid::WindGrid& grid, std::size_t t, const Site& s, std::uint64_t& calm) {
  const double u10 = windgrid::interpolate(grid, Variable::U10, t, s.cell);
  const double v10c = windgrid::interpolate(grid, Variable::V10, t, s.cell);
  const double u100 = windgrid::interpolate(grid, Variable::U100, t, s.cell);
  const double v100c = windgrid::interpolate(grid, Variable::V100, t, s.cell);
  const double v10 = std::sqrt(u10 * u10 + v10c * v10c);
  const double v100 = std::sqrt(u100 * u100 + v100c * v100c);
  double vh = v100;
  if (v10 > 0.0 && v100 > 0.0) {
    if (s.height_exponent != 0.0) vh = v100 * std::pow(v100 / v10, s.height_exponent);
  } else {
    ++calm;
  }
  return vh * vh * vh;
}

// Per-site compensated sums of v³ for each block; out[b][site].
std::uint64_t accumulate_v3(const windgrid::WindGrid& grid, std::span<const Site> sites,
                            std::span<const TimeBlock> blocks, unsigned workers,
                            std::vector<std::vector<CompensatedSum>>& out) {
  out.assign(blocks.size(), std::vector<CompensatedSum>(sites.size()));
  if (sites.empty()) return 0;
  const std::size_t n_workers = std::clamp<std::size_t>(workers, 1, sites.size());
  std::vector<std::uint64_t> calm(n_workers, 0);

  auto run = [&](std::size_t w) {
    const std::size_t begin = sites.size() * w / n_workers;
    const std::size_t end = sites.size() * (w + 1) / n_workers;
    std::uint64_t local_calm = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      auto& acc = out[b];
      for (std::size_t t = blocks[b].lo; t < blocks[b].hi; ++t) {
        for (std::size_t i = begin; i < end; ++i) acc[i].add(hub_v3(grid, t, sites[i], local_calm));
      }
    }
    calm[w] = local_calm;
  };

  if (n_workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) threads.emplace_back(run, w);
    for (auto& th : threads) th.join();
  }
  std::uint64_t total = 0;
  for (auto c : calm) total += c;
  return total;
}

std::vector<Period> months_of(const Period& p) {
  if (p.month) return {p};
  std::vector<Period> out;
  for (int m = 1; m <= 12; ++m) out.push_back(Period::of_month(p.year, m));
  return out;
}

void require_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw DataError(std::string(kModule), "ratio inputs must be non-empty and of equal length");
  }
}

}  // namespace

double kinetic_power(double v, double area) {
  if (!(v >= 0.0) || !(area >= 0.0)) {
    throw DomainError(std::string(kModule), "wind speed and area must be >= 0");
  }
  return 0.5 * kAirDensity * area * v * v * v;
}

PinCalculator::PinCalculator(const windgrid::WindGrid& grid, const fleet::Fleet& fleet, PinSettings settings)
    : grid_(grid), fleet_(fleet), settings_(settings) {
  if (settings_.workers == 0) throw ConfigError(std::string(kModule), "worker count must be >= 1");
  if (settings_.study.size() <= 0) throw ConfigError(std::string(kModule), "empty study period");
  std::vector<std::string> outside;
  cells_.reserve(fleet.size());
  kinetic_factor_.reserve(fleet.size());
  for (const auto& t : fleet.turbines()) {
    if (!grid.contains(t.lon, t.lat)) {
      outside.push_back(t.id);
      continue;
    }
    cells_.push_back(windgrid::locate(grid, t.lon, t.lat));
    kinetic_factor_.push_back(0.5 * kAirDensity * fleet::rotor_swept_area(*t.rotor_diameter));
  }
  if (!outside.empty()) {
    const std::size_t shown = std::min<std::size_t>(outside.size(), 20);
    std::vector<std::string> head(outside.begin(), outside.begin() + static_cast<long>(shown));
    throw DataError(std::string(kModule),
                    fmt::format("{} turbine(s) outside wind grid: {}{}", outside.size(), fmt::join(head, ", "),
                                outside.size() > shown ? ", ..." : ""));
  }
}

PinCalculator::Cache& PinCalculator::cache_for(const PinMode& mode) {
  return cache_[mode.height == HeightMode::Hub ? -1.0 : mode.fixed_height];
}

void PinCalculator::ensure_months(const PinMode& mode, std::span<const Period> months) {
  if (mode.height == HeightMode::Fixed && !(mode.fixed_height > 0.0)) {
    throw DomainError(std::string(kModule), "reference height must be > 0");
  }
  auto& cache = cache_for(mode);
  std::vector<Period> todo;
  std::vector<TimeBlock> blocks;
  for (const auto& m : months) {
    if (cache.contains({m.year, *m.month})) continue;
    const auto [lo, hi] = grid_.time_indices(m);
    todo.push_back(m);
    blocks.push_back({lo, hi});
  }
  if (todo.empty()) return;

  std::vector<Site> sites(cells_.size());
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const double h = mode.height == HeightMode::Hub ? *fleet_.turbines()[i].hub_height : mode.fixed_height;
    sites[i] = {cells_[i], std::log10(h / windgrid::kHighHeight)};
  }
  std::vector<std::vector<CompensatedSum>> sums;
  calm_events_ += accumulate_v3(grid_, sites, blocks, settings_.workers, sums);
  for (std::size_t b = 0; b < todo.size(); ++b) {
    cache[{todo[b].year, *todo[b].month}] = MonthSums{blocks[b].hi - blocks[b].lo, std::move(sums[b])};
  }
}

const std::vector<double>& PinCalculator::long_term_mean(const PinMode& mode) {
  const HeightKey key = mode.height == HeightMode::Hub ? -1.0 : mode.fixed_height;
  if (auto it = long_term_.find(key); it != long_term_.end()) return it->second;

  std::vector<Period> months;
  for (int y = settings_.study.first; y <= settings_.study.last; ++y) {
    for (int m = 1; m <= 12; ++m) months.push_back(Period::of_month(y, m));
  }
  ensure_months(mode, months);
  const auto& cache = cache_for(mode);
  std::vector<CompensatedSum> totals(cells_.size());
  std::size_t steps = 0;
  for (const auto& m : months) {
    const auto& ms = cache.at({m.year, *m.month});
    steps += ms.steps;
    for (std::size_t i = 0; i < totals.size(); ++i) totals[i].add(ms.per_turbine[i]);
  }
  std::vector<double> mean(cells_.size());
  for (std::size_t i = 0; i < mean.size(); ++i) mean[i] = totals[i].value() / static_cast<double>(steps);
  return long_term_.emplace(key, std::move(mean)).first->second;
}

double PinCalculator::weighted_total(int year, std::span<const double> per_turbine_v3) const {
  CompensatedSum total;
  const auto& turbines = fleet_.turbines();
  for (std::size_t i = 0; i < turbines.size(); ++i) {
    const double w = fleet::operating_weight(turbines[i], year);
    if (w != 0.0) total.add(w * kinetic_factor_[i] * per_turbine_v3[i]);
  }
  return total.value();
}

double PinCalculator::aggregate(const Period& period, const PinMode& mode) {
  if (mode.climate == ClimateMode::LongTermAverage) {
    // coverage of the period itself is still required
    (void)grid_.time_indices(period);
    return weighted_total(period.year, long_term_mean(mode));
  }
  const auto months = months_of(period);
  ensure_months(mode, months);
  const auto& cache = cache_for(mode);
  std::vector<CompensatedSum> totals(cells_.size());
  std::size_t steps = 0;
  for (const auto& m : months) {
    const auto& ms = cache.at({m.year, *m.month});
    steps += ms.steps;
    for (std::size_t i = 0; i < totals.size(); ++i) totals[i].add(ms.per_turbine[i]);
  }
  std::vector<double> mean(cells_.size());
  for (std::size_t i = 0; i < mean.size(); ++i) mean[i] = totals[i].value() / static_cast<double>(steps);
  return weighted_total(period.year, mean);
}

AnnualSeries PinCalculator::annual(YearRange years, const PinMode& mode) {
  std::vector<double> out;
  for (int y = years.first; y <= years.last; ++y) out.push_back(aggregate(Period::whole_year(y), mode));
  return AnnualSeries(years.first, std::move(out), Unit::Watt);
}

std::vector<double> PinCalculator::monthly(YearRange years, const PinMode& mode) {
  std::vector<double> out;
  for (int y = years.first; y <= years.last; ++y) {
    for (int m = 1; m <= 12; ++m) out.push_back(aggregate(Period::of_month(y, m), mode));
  }
  return out;
}

double aggregate_pin(const windgrid::WindGrid& grid, const fleet::Fleet& fleet, const Period& period,
                     const PinMode& mode, const PinSettings& settings) {
  PinCalculator calc(grid, fleet, settings);
  return calc.aggregate(period, mode);
}

MonthlySeries parse_generation_csv(std::string_view text) {
  const auto table = csv::parse(text, kModule);
  const auto c_year = table.require_column(kModule, "year");
  const auto c_month = table.require_column(kModule, "month");
  const auto c_mwh = table.require_column(kModule, "net_generation_mwh");
  if (table.rows.empty()) throw DataError(std::string(kModule), "no generation data");

  std::map<std::pair<int, int>, double> rows;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const auto year = static_cast<int>(csv::integer(r[c_year], kModule, "year", i + 1));
    const auto month = static_cast<int>(csv::integer(r[c_month], kModule, "month", i + 1));
    if (month < 1 || month > 12) {
      throw ParseError(std::string(kModule), fmt::format("month out of range, row {}", i + 1));
    }
    const double mwh = csv::number(r[c_mwh], kModule, "net_generation_mwh", i + 1);
    if (!rows.emplace(std::pair{year, month}, mwh * kWhPerMWh).second) {
      throw DataError(std::string(kModule), fmt::format("duplicate month {:04d}-{:02d}", year, month));
    }
  }
  MonthlySeries s;
  s.start_year = rows.begin()->first.first;
  s.start_month = rows.begin()->first.second;
  for (const auto& [ym, wh] : rows) {
    const int expected_year = s.year_of(s.values.size());
    const int expected_month = s.month_of(s.values.size());
    if (ym.first != expected_year || ym.second != expected_month) {
      throw DataError(std::string(kModule),
                      fmt::format("missing month {:04d}-{:02d}", expected_year, expected_month));
    }
    s.values.push_back(wh);
  }
  return s;
}

std::string generation_to_csv(const MonthlySeries& energy_wh) {
  std::string out = "year,month,net_generation_mwh\n";
  for (std::size_t i = 0; i < energy_wh.size(); ++i) {
    out += fmt::format("{},{},{}\n", energy_wh.year_of(i), energy_wh.month_of(i),
                       format_number(energy_wh.values[i] / kWhPerMWh));
  }
  return out;
}

double pout(const MonthlySeries& energy_wh, const Period& period) {
  CompensatedSum total;
  for (const auto& m : months_of(period)) {
    const long idx = energy_wh.index_of(m.year, *m.month);
    if (idx < 0) throw DataError(std::string(kModule), fmt::format("missing generation for {}", m.label()));
    total.add(energy_wh.values[static_cast<std::size_t>(idx)]);
  }
  return total.value() / static_cast<double>(period.hours());
}

AnnualSeries pout_series(const MonthlySeries& energy_wh, YearRange years) {
  std::vector<double> out;
  for (int y = years.first; y <= years.last; ++y) out.push_back(pout(energy_wh, Period::whole_year(y)));
  return AnnualSeries(years.first, std::move(out), Unit::Watt);
}

double input_power_density(double p_in, double area) {
  if (!(area > 0.0)) throw DomainError(std::string(kModule), "swept area must be > 0");
  return p_in / area;
}

double output_power_density(double p_out, double area) {
  if (!(area > 0.0)) throw DomainError(std::string(kModule), "swept area must be > 0");
  return p_out / area;
}

double system_efficiency(double p_out, double p_in, Diagnostics* diag) {
  if (!(p_in > 0.0)) throw DomainError(std::string(kModule), "power input must be > 0");
  const double e = p_out / p_in;
  if (diag && e > kBetzLimit) {
    diag->warn(fmt::format("system efficiency {:.4f} exceeds the Betz limit; input data are inconsistent", e));
  }
  return e;
}

double capacity_factor(double p_out, double capacity) {
  if (!(capacity > 0.0)) throw DomainError(std::string(kModule), "capacity must be > 0");
  return p_out / capacity;
}

double ratio_of_sums(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  const double denom = compensated_sum(b);
  if (denom == 0.0) throw DomainError(std::string(kModule), "denominator sums to 0");
  return compensated_sum(a) / denom;
}

double weighted_mean_of_ratios(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  const double n = static_cast<double>(b.size());
  const double mean_b = compensated_sum(b) / n;
  if (mean_b == 0.0) throw DomainError(std::string(kModule), "denominator sums to 0");
  CompensatedSum s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] == 0.0) throw DomainError(std::string(kModule), "zero denominator");
    s.add((b[i] / mean_b) * (a[i] / b[i]));
  }
  return s.value() / n;
}

double mean_of_ratios(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  CompensatedSum s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] == 0.0) throw DomainError(std::string(kModule), "zero denominator");
    s.add(a[i] / b[i]);
  }
  return s.value() / static_cast<double>(a.size());
}

}  // namespace windecomp::powerflux
