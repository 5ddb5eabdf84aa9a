#include "windecomp/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include <fmt/format.h>

#include "windecomp/csv.hpp"
#include "windecomp/error.hpp"
#include "windecomp/plots.hpp"
#include "windecomp/powerflux.hpp"

namespace windecomp::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kModule = "pipeline";
constexpr double kIdentityTolerance = 1e-12;

const std::vector<std::string> kAggregateComponents{"n",    "area",     "capacity",     "p_in",
                                                    "p_in_avg", "p_in_ref_avg", "p_out"};

template <typename F>
AnnualSeries map_years(const AnnualSeries& a, const AnnualSeries& b, Unit unit, F f) {
  std::vector<double> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(f(a[i], b[i]));
  return AnnualSeries(a.start_year(), std::move(out), unit);
}

json fit_json(const trends::OlsFit& fit) {
  return json{{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared},
              {"residuals", fit.residuals}};
}

const AnnualSeries& require_pout(const Aggregates& agg, std::string_view stage) {
  if (!agg.p_out) throw ConfigError(std::string(stage), "power output series missing (generation data required)");
  return *agg.p_out;
}

std::vector<double> monthly_pout(const MonthlySeries& gen, YearRange years) {
  std::vector<double> out;
  for (int y = years.first; y <= years.last; ++y) {
    for (int m = 1; m <= 12; ++m) out.push_back(powerflux::pout(gen, Period::of_month(y, m)));
  }
  return out;
}

}  // namespace

void Bundle::add_chart(const std::string& name, const svg::Chart& chart) {
  files[name + ".svg"] = svg::render(chart);
  files[name + ".csv"] = svg::to_csv(chart);
}

json series_json(const AnnualSeries& s) {
  return json{{"start_year", s.start_year()}, {"unit", std::string(unit_symbol(s.unit()))}, {"values", s.values()}};
}

LoadedFleet load_fleet(const RunConfig& config) {
  if (config.turbines.empty()) throw ConfigError("fleet", "no turbine file given");
  auto records = fleet::parse_turbine_csv(csv::read_file(config.turbines, "fleet"));
  std::size_t added = 0, updated = 0;
  if (!config.extension.empty()) {
    auto ext = fleet::parse_turbine_csv(csv::read_file(config.extension, "fleet"));
    auto merged = fleet::merge_extension(std::move(records), ext);
    records = std::move(merged.records);
    added = merged.added;
    updated = merged.updated;
  }
  std::set<std::string> exclusions;
  if (!config.exclusions.empty()) exclusions = fleet::parse_exclusion_list(csv::read_file(config.exclusions, "fleet"));
  return LoadedFleet{fleet::preprocess(std::move(records), exclusions), added, updated};
}

PowerRun compute_power(const fleet::Fleet& fleet, const windgrid::WindGrid& grid, const RunConfig& config,
                       const std::optional<MonthlySeries>& generation) {
  using powerflux::ClimateMode;
  using powerflux::HeightMode;
  const YearRange years = config.study;
  powerflux::PinCalculator calc(grid, fleet, {years, config.workers});
  const powerflux::PinMode actual{HeightMode::Hub, ClimateMode::Actual};
  const powerflux::PinMode hub_avg{HeightMode::Hub, ClimateMode::LongTermAverage};
  const powerflux::PinMode ref_avg{HeightMode::Fixed, ClimateMode::LongTermAverage, config.reference_height};

  PowerRun run{Aggregates{fleet::annual_counts(fleet, years), fleet::annual_swept_area(fleet, years),
                          fleet::annual_capacity(fleet, years), calc.annual(years, actual),
                          calc.annual(years, hub_avg), calc.annual(years, ref_avg), std::nullopt},
               calc.monthly(years, actual), 0};
  if (generation) run.aggregates.p_out = powerflux::pout_series(*generation, years);
  run.calm_events = calc.calm_events();
  return run;
}

std::string aggregates_to_csv(const Aggregates& a) {
  std::string out = "year,component,value,unit\n";
  auto rows = [&](const AnnualSeries& s, std::string_view name) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      out += fmt::format("{},{},{},{}\n", s.start_year() + static_cast<int>(i), name, format_number(s[i]),
                         unit_symbol(s.unit()));
    }
  };
  rows(a.n, "n");
  rows(a.area, "area");
  rows(a.capacity_mw, "capacity");
  rows(a.p_in, "p_in");
  rows(a.p_in_avg, "p_in_avg");
  rows(a.p_in_ref_avg, "p_in_ref_avg");
  if (a.p_out) rows(*a.p_out, "p_out");
  return out;
}

Aggregates aggregates_from_csv(std::string_view text) {
  const auto table = csv::parse(text, kModule);
  const auto c_year = table.require_column(kModule, "year");
  const auto c_comp = table.require_column(kModule, "component");
  const auto c_val = table.require_column(kModule, "value");
  const auto c_unit = table.require_column(kModule, "unit");
  std::map<std::string, std::map<int, double>> values;
  std::map<std::string, Unit> units;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const auto year = static_cast<int>(csv::integer(r[c_year], kModule, "year", i + 1));
    const auto& comp = r[c_comp];
    if (std::find(kAggregateComponents.begin(), kAggregateComponents.end(), comp) == kAggregateComponents.end()) {
      throw ParseError(std::string(kModule), fmt::format("unknown component '{}', row {}", comp, i + 1));
    }
    units[comp] = parse_unit(r[c_unit]);
    if (!values[comp].emplace(year, csv::number(r[c_val], kModule, "value", i + 1)).second) {
      throw DataError(std::string(kModule), fmt::format("duplicate {} for {}", comp, year));
    }
  }
  auto series = [&](const std::string& comp) -> std::optional<AnnualSeries> {
    auto it = values.find(comp);
    if (it == values.end()) return std::nullopt;
    std::vector<double> v;
    int expected = it->second.begin()->first;
    for (const auto& [year, value] : it->second) {
      if (year != expected) throw DataError(std::string(kModule), fmt::format("{} has a gap at {}", comp, expected));
      v.push_back(value);
      ++expected;
    }
    return AnnualSeries(it->second.begin()->first, std::move(v), units.at(comp));
  };
  auto required = [&](const std::string& comp) {
    auto s = series(comp);
    if (!s) throw DataError(std::string(kModule), fmt::format("aggregates lack component '{}'", comp));
    return *s;
  };
  Aggregates agg{required("n"),        required("area"),         required("capacity"), required("p_in"),
                 required("p_in_avg"), required("p_in_ref_avg"), series("p_out")};
  for (const AnnualSeries* s : {&agg.area, &agg.capacity_mw, &agg.p_in, &agg.p_in_avg, &agg.p_in_ref_avg}) {
    require_aligned(kModule, agg.n, *s);
  }
  if (agg.p_out) require_aligned(kModule, agg.n, *agg.p_out);
  return agg;
}

void add_decomposition(Bundle& bundle, const Aggregates& agg, const RunConfig& config) {
  const auto& p_out = require_pout(agg, "decomp");
  const int base = config.effective_base_year();
  const auto factors = decomp::multiplicative_decomposition(agg.n, agg.area, agg.p_in, p_out);
  if (factors.max_identity_error > kIdentityTolerance) {
    throw InvariantError("decomp", fmt::format("factor product deviates from P_out by {:.3g}", factors.max_identity_error));
  }
  const auto effects = decomp::additive_pin_decomposition(agg.p_in, agg.p_in_avg, agg.p_in_ref_avg, agg.area, base,
                                                          config.reference_height);
  if (effects.max_identity_error > kIdentityTolerance) {
    throw InvariantError("decomp",
                         fmt::format("effects do not sum to input power density ({:.3g})", effects.max_identity_error));
  }

  std::vector<plots::NamedSeries> indexed{
      {"number of turbines", decomp::index_relative(factors.n, base)},
      {"rotor swept area per turbine", decomp::index_relative(factors.area_per_turbine, base)},
      {"input power density", decomp::index_relative(factors.input_density, base)},
      {"system efficiency", decomp::index_relative(factors.efficiency, base)},
      {"power output", decomp::index_relative(p_out, base)},
  };
  const auto segments = decomp::waterfall(effects);

  json indexed_json = json::object();
  for (const auto& [name, s] : indexed) indexed_json[name] = series_json(s);
  bundle.report["decomposition"] = json{
      {"base_year", base},
      {"factors",
       {{"n", series_json(factors.n)},
        {"area_per_turbine", series_json(factors.area_per_turbine)},
        {"input_density", series_json(factors.input_density)},
        {"efficiency", series_json(factors.efficiency)},
        {"max_identity_error", factors.max_identity_error}}},
      {"indexed", indexed_json},
      {"additive",
       {{"baseline", effects.baseline},
        {"reference_height", effects.reference_height},
        {"new_locations", series_json(effects.new_locations)},
        {"hub_height", series_json(effects.hub_height)},
        {"annual_variation", series_json(effects.annual_variation)},
        {"input_density", series_json(effects.input_density)},
        {"max_identity_error", effects.max_identity_error},
        {"note",
         "the annual-variation effect is not independent of the hub-height effect: taller turbines see larger "
         "absolute climate fluctuations"}}},
  };
  bundle.files["factors.csv"] = decomp::factors_to_csv(factors, p_out);
  bundle.files["effects.csv"] = decomp::effects_to_csv(effects);
  bundle.files["waterfall.csv"] = decomp::waterfall_to_csv(segments);
  bundle.add_chart("fig3_indexed_factors", plots::indexed_factors(indexed));
  bundle.add_chart("fig5_additive_effects", plots::additive_effects(effects));
  bundle.add_chart("figA5_waterfall", plots::waterfall(segments));
}

void add_trends(Bundle& bundle, const Aggregates& agg, const std::vector<double>& monthly_p_in,
                const std::optional<MonthlySeries>& generation) {
  const auto& p_out = require_pout(agg, "trends");
  const YearRange years = agg.years();
  const auto out_density = map_years(p_out, agg.area, Unit::WattPerSquareMeter, powerflux::output_power_density);
  const auto in_density = map_years(agg.p_in, agg.area, Unit::WattPerSquareMeter, powerflux::input_power_density);
  const auto efficiency = map_years(p_out, agg.p_in, Unit::Dimensionless, [&](double o, double i) {
    return powerflux::system_efficiency(o, i, &bundle.diagnostics);
  });
  const auto capacity_w = map_years(agg.capacity_mw, agg.capacity_mw, Unit::Watt, [](double c, double) { return c * 1e6; });
  const auto cap_factor = map_years(p_out, capacity_w, Unit::Dimensionless, powerflux::capacity_factor);
  const auto spec_power = map_years(capacity_w, agg.area, Unit::WattPerSquareMeter, fleet::specific_power);

  json t = json::object();
  t["output_density"] = series_json(out_density);
  t["input_density"] = series_json(in_density);
  t["efficiency"] = series_json(efficiency);
  t["capacity_factor"] = series_json(cap_factor);
  t["specific_power"] = series_json(spec_power);
  if (years.size() >= 2) {
    t["output_density_trend"] = fit_json(trends::trend_fit(out_density));
    t["input_density_trend"] = fit_json(trends::trend_fit(in_density));
    t["efficiency_trend"] = fit_json(trends::trend_fit(efficiency));
    t["capacity_factor_trend"] = fit_json(trends::trend_fit(cap_factor));
  }

  std::optional<AnnualSeries> counterfactual;
  if (years.size() >= 3) {
    const auto cf = trends::counterfactual_efficiency(efficiency, in_density);
    counterfactual = cf.efficiency;
    t["counterfactual"] = json{{"efficiency", series_json(cf.efficiency)},
                               {"slope_on_density", cf.slope_on_density},
                               {"intercept", cf.intercept},
                               {"mean_density", cf.mean_density},
                               {"degenerate", cf.degenerate},
                               {"trend", fit_json(trends::trend_fit(cf.efficiency))}};
    if (cf.degenerate) bundle.diagnostics.warn("input power density is constant; counterfactual equals observed efficiency");
  } else {
    t["counterfactual"] = nullptr;
  }

  std::vector<double> monthly_density, monthly_efficiency;
  if (generation && !monthly_p_in.empty()) {
    const auto m_out = monthly_pout(*generation, years);
    json ratios = json::array();
    for (int y = years.first; y <= years.last; ++y) {
      const auto k = static_cast<std::size_t>(y - years.first);
      std::vector<double> energy_out, energy_in;
      for (int m = 1; m <= 12; ++m) {
        const auto i = k * 12 + static_cast<std::size_t>(m - 1);
        const auto h = static_cast<double>(hours_in_month(y, m));
        energy_out.push_back(m_out[i] * h);
        energy_in.push_back(monthly_p_in[i] * h);
        if (monthly_p_in[i] > 0.0) {
          monthly_density.push_back(monthly_p_in[i] / agg.area[k]);
          monthly_efficiency.push_back(m_out[i] / monthly_p_in[i]);
        }
      }
      const bool positive = std::all_of(energy_in.begin(), energy_in.end(), [](double v) { return v > 0.0; });
      ratios.push_back(json{{"year", y},
                            {"ratio_of_averages", powerflux::ratio_of_sums(energy_out, energy_in)},
                            {"mean_of_monthly_ratios",
                             positive ? json(powerflux::mean_of_ratios(energy_out, energy_in)) : json(nullptr)}});
    }
    t["ratio_of_averages"] = ratios;
    try {
      t["monthly_correlation"] = trends::pearson(monthly_density, monthly_efficiency);
    } catch (const DomainError&) {
      t["monthly_correlation"] = nullptr;
      bundle.diagnostics.warn("monthly correlation undefined: zero variance in efficiency or input power density");
    } catch (const DataError&) {
      t["monthly_correlation"] = nullptr;
    }
  }
  bundle.report["trends"] = t;

  bundle.add_chart("fig2_output_power_density", plots::output_density(out_density));
  bundle.add_chart("fig4_system_efficiency", plots::efficiency(efficiency, counterfactual.value_or(efficiency)));
  bundle.add_chart("figA2_efficiency_vs_density", plots::efficiency_vs_density(monthly_density, monthly_efficiency));
  bundle.add_chart("figA6_capacity_factor", plots::capacity_factor(cap_factor));
}

void add_validation(Bundle& bundle, const fleet::Fleet& fleet, const RunConfig& config,
                    const std::optional<AnnualSeries>& p_out) {
  const YearRange years = config.study;
  auto scenarios = validate::default_scenarios();
  if (!config.scenarios.empty()) {
    std::vector<validate::NamedScenario> chosen;
    for (const auto& name : config.scenarios) {
      auto it = std::find_if(scenarios.begin(), scenarios.end(), [&](const auto& s) { return s.name == name; });
      if (it == scenarios.end()) throw ConfigError("validate", fmt::format("unknown scenario '{}'", name));
      chosen.push_back(*it);
    }
    scenarios = std::move(chosen);
  }
  const auto results = validate::run_scenarios(fleet, years, scenarios);
  const auto missing = validate::missingness_report(fleet.turbines());

  json v = json::object();
  json scen = json::object();
  for (const auto& r : results) scen[r.name] = series_json(r.capacity_mw);
  v["scenarios"] = scen;

  json miss = json::array();
  for (const auto& m : missing) {
    miss.push_back(json{{"year", m.year}, {"operating", m.operating}, {"hub_height", m.hub_height},
                        {"rotor_diameter", m.rotor_diameter}, {"capacity", m.capacity},
                        {"low_confidence", m.low_confidence}});
  }
  v["missingness"] = miss;

  const auto area = fleet::annual_swept_area(fleet, years);
  json bounds = json::array();
  std::string bounds_csv = "year,low_m2,mean_m2,high_m2\n";
  for (int y = years.first; y <= years.last; ++y) {
    const auto b = fleet::imputation_bounds(fleet.turbines(), y);
    const double mean = area.at_year(y);
    bounds.push_back(json{{"year", y}, {"low", b.low}, {"mean", mean}, {"high", b.high}});
    bounds_csv += fmt::format("{},{},{},{}\n", y, format_number(b.low), format_number(mean), format_number(b.high));
  }
  v["imputation_bounds"] = bounds;

  json low_conf = json::array();
  for (int y = years.first; y <= years.last && y < validate::kFirstConfidentYear; ++y) low_conf.push_back(y);
  v["low_confidence_years"] = low_conf;

  std::vector<plots::NamedSeries> diffs;
  if (!config.reference.empty()) {
    const auto ref = validate::parse_reference_csv(csv::read_file(config.reference, "validate"));
    json rel = json::object();
    if (auto cap = ref.capacity(years)) {
      for (const auto& r : results) {
        auto d = validate::relative_difference(r.capacity_mw, *cap);
        rel["capacity_" + r.name] = series_json(d);
        diffs.emplace_back("capacity " + r.name, std::move(d));
      }
    } else {
      bundle.diagnostics.warn("reference capacity does not cover the study period; comparison skipped");
    }
    if (p_out) {
      if (auto gen = ref.generation(years)) {
        std::vector<double> gwh;
        for (int y = years.first; y <= years.last; ++y) {
          gwh.push_back(p_out->at_year(y) * static_cast<double>(hours_in_year(y)) / 1e9);
        }
        auto d = validate::relative_difference(AnnualSeries(years.first, std::move(gwh), Unit::GigawattHour), *gen);
        rel["generation"] = series_json(d);
        diffs.emplace_back("generation", std::move(d));
      } else {
        bundle.diagnostics.warn("reference generation does not cover the study period; comparison skipped");
      }
    }
    v["relative_difference"] = rel;
    std::string rd_csv = "series,year,value\n";
    for (const auto& [name, s] : diffs) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        rd_csv += fmt::format("{},{},{}\n", name, s.start_year() + static_cast<int>(i), format_number(s[i]));
      }
    }
    bundle.files["relative_difference.csv"] = rd_csv;
  }
  bundle.report["validation"] = v;
  bundle.files["scenarios.csv"] = validate::scenarios_to_csv(results);
  bundle.files["missingness.csv"] = validate::missingness_to_csv(missing);
  bundle.files["imputation_bounds.csv"] = bounds_csv;
  bundle.add_chart("figA3_missingness", plots::missingness(missing));
  bundle.add_chart("figA4_relative_difference", plots::relative_difference(diffs));
}

Bundle run_pipeline(const RunConfig& config) {
  config.validate();
  if (config.windgrid.empty()) throw ConfigError("windgrid", "no wind grid file given");
  if (config.generation.empty()) throw ConfigError("powerflux", "no generation file given");

  const auto loaded = load_fleet(config);
  const auto grid = windgrid::load_windgrid(config.windgrid);
  const auto generation = powerflux::parse_generation_csv(csv::read_file(config.generation, "powerflux"));
  const auto power = compute_power(loaded.fleet, grid, config, generation);

  Bundle bundle;
  const auto& f = loaded.fleet;
  bundle.report["schema_version"] = kSchemaVersion;
  bundle.report["study"] = json{{"first_year", config.study.first}, {"last_year", config.study.last}};
  bundle.report["fleet"] = json{{"turbines", f.size()},
                                {"input_records", f.provenance().input_records},
                                {"dropped_missing_commissioning_year", f.provenance().missing_commissioning_year},
                                {"dropped_excluded", f.provenance().excluded},
                                {"extension_added", loaded.extension_added},
                                {"extension_updated", loaded.extension_updated},
                                {"imputed_values", f.imputation().filled}};
  const auto& a = power.aggregates;
  bundle.report["aggregates"] = json{{"n", series_json(a.n)},
                                     {"area", series_json(a.area)},
                                     {"capacity", series_json(a.capacity_mw)},
                                     {"p_in", series_json(a.p_in)},
                                     {"p_in_avg", series_json(a.p_in_avg)},
                                     {"p_in_ref_avg", series_json(a.p_in_ref_avg)},
                                     {"p_out", series_json(*a.p_out)}};
  bundle.report["calm_events"] = power.calm_events;
  bundle.files["aggregates.csv"] = aggregates_to_csv(a);

  add_decomposition(bundle, a, config);
  add_trends(bundle, a, power.monthly_p_in, generation);
  add_validation(bundle, f, config, a.p_out);
  bundle.report["warnings"] = bundle.diagnostics.warnings();
  return bundle;
}

void write_bundle(const Bundle& bundle, const std::string& out_dir, const std::string& report_name) {
  const fs::path out(out_dir);
  const fs::path staging = out / ".staging";
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw DataError("io", fmt::format("cannot create {}: {}", out_dir, ec.message()));
  fs::remove_all(staging, ec);
  try {
    fs::create_directories(staging);
    for (const auto& [name, contents] : bundle.files) csv::write_file((staging / name).string(), contents);
    if (!bundle.report.empty()) csv::write_file((staging / report_name).string(), bundle.report.dump(2) + "\n");
    for (const auto& entry : fs::directory_iterator(staging)) {
      fs::rename(entry.path(), out / entry.path().filename());
    }
    fs::remove_all(staging);
  } catch (const fs::filesystem_error& e) {
    fs::remove_all(staging, ec);
    throw DataError("io", e.what());
  } catch (...) {
    fs::remove_all(staging, ec);
    throw;
  }
}

}  // namespace windecomp::pipeline
