// Command-line front end: synthetic fixtures, grid conversion and the
// decomposition pipeline, stage by stage or end to end.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "windecomp/config.hpp"
#include "windecomp/csv.hpp"
#include "windecomp/error.hpp"
#include "windecomp/pipeline.hpp"
#include "windecomp/powerflux.hpp"
#include "windecomp/synth.hpp"
#include "windecomp/validate.hpp"

namespace {

using namespace windecomp;

enum ExitCode { kOk = 0, kConfigError = 2, kDataError = 3, kInternalError = 4 };

/// Options shared by the pipeline subcommands; only flags actually given override the config file.
struct CommonOptions {
  std::string config_file;
  std::map<std::string, std::string> flags;

  void attach(CLI::App* app, std::initializer_list<const char*> keys) {
    app->add_option("--config", config_file, "key = value configuration file");
    for (const char* key : keys) {
      std::string flag = std::string("--") + key;
      for (auto& c : flag) {
        if (c == '_') c = '-';
      }
      app->add_option_function<std::string>(
          flag, [this, key](const std::string& v) { flags[key] = v; }, std::string("overrides ") + key);
    }
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config_file.empty()) {
      cfg = apply_settings(cfg, parse_key_values(csv::read_file(config_file, "config")));
    }
    cfg = apply_settings(cfg, flags);
    cfg.validate();
    return cfg;
  }
};

std::int64_t parse_time(const std::string& text) {
  int y = 0, m = 0, d = 0;
  if (std::sscanf(text.c_str(), "%d-%d-%d", &y, &m, &d) == 3) return unix_seconds(y, m, d);
  try {
    std::size_t used = 0;
    const auto v = std::stoll(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("convert-grid", "t0 must be YYYY-MM-DD or Unix seconds");
}

std::optional<MonthlySeries> maybe_generation(const RunConfig& cfg) {
  if (cfg.generation.empty()) return std::nullopt;
  return powerflux::parse_generation_csv(csv::read_file(cfg.generation, "powerflux"));
}

pipeline::Aggregates load_aggregates(const std::string& path) {
  if (path.empty()) throw ConfigError("pipeline", "no aggregates file given (--aggregates)");
  return pipeline::aggregates_from_csv(csv::read_file(path, "pipeline"));
}

struct SynthOptions {
  int turbines = 100;
  std::uint64_t seed = 1;
  int start_year = 2010;
  int end_year = 2019;
  std::size_t n_lat = 4, n_lon = 4;
  std::string wind = "constant";
  double v10 = 8.0, v100 = 8.0;
  double mean = 8.0, amplitude = 2.0, period = 24.0, sd = 2.0, low_ratio = 0.8;
  double east_speedup = 0.0;
  double hub_start = 80.0, hub_step = 0.0;
  double rotor_start = 100.0, rotor_step = 0.0;
  double efficiency_start = 0.3, efficiency_step = 0.0;
  double missing_share = 0.0;
};

void run_synth(const SynthOptions& o, const std::string& out_dir, unsigned workers) {
  synth::SynthSpec spec;
  spec.n_turbines = o.turbines;
  spec.years = {o.start_year, o.end_year};
  spec.n_lat = o.n_lat;
  spec.n_lon = o.n_lon;
  if (o.wind == "constant") {
    spec.wind = synth::ConstantWind{o.v10, o.v100};
  } else if (o.wind == "sinusoidal") {
    spec.wind = synth::SinusoidalWind{o.mean, o.amplitude, o.period, o.low_ratio};
  } else if (o.wind == "noise") {
    spec.wind = synth::NoiseWind{o.mean, o.sd, o.low_ratio};
  } else {
    throw ConfigError("synth", "wind model must be constant, sinusoidal or noise");
  }
  spec.east_speedup = o.east_speedup;
  spec.hub_height = {o.hub_start, o.hub_step};
  spec.rotor_diameter = {o.rotor_start, o.rotor_step};
  spec.true_efficiency = {o.efficiency_start, o.efficiency_step};
  spec.missing_share = o.missing_share;

  const auto fleet_csv = synth::generate_fleet(spec, o.seed);
  const auto grid = synth::generate_windgrid(spec, o.seed ^ 0x5DEECE66DULL);
  const auto fleet = fleet::preprocess(fleet::parse_turbine_csv(fleet_csv), {});
  const auto gen = synth::generate_generation(fleet, grid, spec.true_efficiency, spec.years, {spec.years, workers});
  const auto capacity = fleet::annual_capacity(fleet, spec.years);
  const auto p_out = powerflux::pout_series(gen, spec.years);

  std::string reference = "year,installed_capacity_mw,generation_gwh\n";
  for (int y = spec.years.first; y <= spec.years.last; ++y) {
    reference += fmt::format("{},{},{}\n", y, format_number(capacity.at_year(y)),
                             format_number(p_out.at_year(y) * static_cast<double>(hours_in_year(y)) / 1e9));
  }
  pipeline::Bundle bundle;
  bundle.files["turbines.csv"] = fleet_csv;
  bundle.files["generation.csv"] = powerflux::generation_to_csv(gen);
  bundle.files["reference.csv"] = reference;
  const auto bytes = windgrid::encode_wgrd(grid);
  bundle.files["windgrid.wgrd"] = std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  bundle.files["run.conf"] = fmt::format(
      "# synthetic fixture, seed {}\nturbines = {}\nwindgrid = {}\ngeneration = {}\nreference = {}\n"
      "start_year = {}\nend_year = {}\n",
      o.seed, (std::filesystem::path(out_dir) / "turbines.csv").string(),
      (std::filesystem::path(out_dir) / "windgrid.wgrd").string(),
      (std::filesystem::path(out_dir) / "generation.csv").string(),
      (std::filesystem::path(out_dir) / "reference.csv").string(), spec.years.first, spec.years.last);
  pipeline::write_bundle(bundle, out_dir);
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return kConfigError;
    case ErrorKind::Data: return kDataError;
    case ErrorKind::Invariant: return kInternalError;
  }
  return kInternalError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wind fleet output decomposition"};
  app.require_subcommand(1);

  // synth
  SynthOptions so;
  std::string synth_out = "fixture";
  unsigned synth_workers = 1;
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic fixture (turbines, grid, generation, reference)");
  synth_cmd->add_option("--out", synth_out, "output directory");
  synth_cmd->add_option("--turbines", so.turbines);
  synth_cmd->add_option("--seed", so.seed);
  synth_cmd->add_option("--start-year", so.start_year);
  synth_cmd->add_option("--end-year", so.end_year);
  synth_cmd->add_option("--n-lat", so.n_lat);
  synth_cmd->add_option("--n-lon", so.n_lon);
  synth_cmd->add_option("--wind", so.wind, "constant | sinusoidal | noise");
  synth_cmd->add_option("--v10", so.v10);
  synth_cmd->add_option("--v100", so.v100);
  synth_cmd->add_option("--mean", so.mean);
  synth_cmd->add_option("--amplitude", so.amplitude);
  synth_cmd->add_option("--period-hours", so.period);
  synth_cmd->add_option("--sd", so.sd);
  synth_cmd->add_option("--low-ratio", so.low_ratio, "10 m speed as a fraction of the 100 m speed");
  synth_cmd->add_option("--east-speedup", so.east_speedup);
  synth_cmd->add_option("--hub-start", so.hub_start);
  synth_cmd->add_option("--hub-step", so.hub_step);
  synth_cmd->add_option("--rotor-start", so.rotor_start);
  synth_cmd->add_option("--rotor-step", so.rotor_step);
  synth_cmd->add_option("--efficiency-start", so.efficiency_start);
  synth_cmd->add_option("--efficiency-step", so.efficiency_step);
  synth_cmd->add_option("--missing-share", so.missing_share);
  synth_cmd->add_option("--workers", synth_workers);

  // convert-grid
  std::string grid_csv, grid_out, grid_t0 = "2010-01-01";
  std::int64_t grid_step = 3600;
  auto* convert_cmd = app.add_subcommand("convert-grid", "build a WGRD file from CSV");
  convert_cmd->add_option("--csv", grid_csv, "time_index,lat,lon,u10,v10,u100,v100")->required();
  convert_cmd->add_option("--output", grid_out, "WGRD file to write")->required();
  convert_cmd->add_option("--t0", grid_t0, "first time step (YYYY-MM-DD or Unix seconds)");
  convert_cmd->add_option("--step", grid_step, "seconds between time steps");

  const auto all_keys = {"turbines", "extension", "exclusions", "windgrid", "generation", "reference",
                         "start_year", "end_year", "base_year", "reference_height", "scenarios", "out", "workers"};

  CommonOptions pin_opts, dec_opts, trend_opts, val_opts, report_opts;
  std::string dec_aggr, trend_aggr, val_aggr;
  auto* pin_cmd = app.add_subcommand("pin", "compute annual power input and fleet aggregates");
  pin_opts.attach(pin_cmd, all_keys);
  auto* dec_cmd = app.add_subcommand("decompose", "multiplicative and additive decomposition of aggregates");
  dec_opts.attach(dec_cmd, all_keys);
  dec_cmd->add_option("--aggregates", dec_aggr, "aggregates.csv from `pin`");
  auto* trend_cmd = app.add_subcommand("trends", "trend fits and counterfactual efficiency");
  trend_opts.attach(trend_cmd, all_keys);
  trend_cmd->add_option("--aggregates", trend_aggr, "aggregates.csv from `pin`");
  auto* val_cmd = app.add_subcommand("validate", "lifetime scenarios, missingness and reference comparison");
  val_opts.attach(val_cmd, all_keys);
  val_cmd->add_option("--aggregates", val_aggr, "aggregates.csv with p_out for the generation comparison");
  auto* report_cmd = app.add_subcommand("report", "run the full pipeline");
  report_opts.attach(report_cmd, all_keys);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*synth_cmd) {
      run_synth(so, synth_out, synth_workers);
    } else if (*convert_cmd) {
      const auto grid = windgrid::windgrid_from_csv(csv::read_file(grid_csv, "windgrid"), parse_time(grid_t0), grid_step);
      windgrid::save_windgrid(grid_out, grid);
    } else if (*pin_cmd) {
      const auto cfg = pin_opts.resolve();
      if (cfg.windgrid.empty()) throw ConfigError("windgrid", "no wind grid file given");
      const auto loaded = pipeline::load_fleet(cfg);
      const auto grid = windgrid::load_windgrid(cfg.windgrid);
      const auto run = pipeline::compute_power(loaded.fleet, grid, cfg, maybe_generation(cfg));
      pipeline::Bundle b;
      const auto& a = run.aggregates;
      b.files["aggregates.csv"] = pipeline::aggregates_to_csv(a);
      b.files["p_in.csv"] = series_to_csv(a.p_in);
      b.files["p_in_avg.csv"] = series_to_csv(a.p_in_avg);
      b.files["p_in_ref_avg.csv"] = series_to_csv(a.p_in_ref_avg);
      b.files["area.csv"] = series_to_csv(a.area);
      b.files["n.csv"] = series_to_csv(a.n);
      b.files["capacity.csv"] = series_to_csv(a.capacity_mw);
      if (a.p_out) b.files["p_out.csv"] = series_to_csv(*a.p_out);
      b.report["schema_version"] = pipeline::kSchemaVersion;
      b.report["calm_events"] = run.calm_events;
      b.report["p_in"] = pipeline::series_json(a.p_in);
      b.report["p_in_avg"] = pipeline::series_json(a.p_in_avg);
      b.report["p_in_ref_avg"] = pipeline::series_json(a.p_in_ref_avg);
      b.report["area"] = pipeline::series_json(a.area);
      b.report["n"] = pipeline::series_json(a.n);
      b.report["capacity"] = pipeline::series_json(a.capacity_mw);
      if (a.p_out) b.report["p_out"] = pipeline::series_json(*a.p_out);
      pipeline::write_bundle(b, cfg.out_dir, "pin.json");
    } else if (*dec_cmd) {
      auto cfg = dec_opts.resolve();
      const auto agg = load_aggregates(dec_aggr);
      cfg.study = agg.years();
      cfg.validate();
      pipeline::Bundle b;
      b.report["schema_version"] = pipeline::kSchemaVersion;
      pipeline::add_decomposition(b, agg, cfg);
      pipeline::write_bundle(b, cfg.out_dir, "decomposition.json");
    } else if (*trend_cmd) {
      const auto cfg = trend_opts.resolve();
      const auto agg = load_aggregates(trend_aggr);
      pipeline::Bundle b;
      b.report["schema_version"] = pipeline::kSchemaVersion;
      pipeline::add_trends(b, agg, {}, std::nullopt);
      b.report["warnings"] = b.diagnostics.warnings();
      pipeline::write_bundle(b, cfg.out_dir, "trends.json");
    } else if (*val_cmd) {
      const auto cfg = val_opts.resolve();
      const auto loaded = pipeline::load_fleet(cfg);
      std::optional<AnnualSeries> p_out;
      if (!val_aggr.empty()) p_out = load_aggregates(val_aggr).p_out;
      pipeline::Bundle b;
      b.report["schema_version"] = pipeline::kSchemaVersion;
      pipeline::add_validation(b, loaded.fleet, cfg, p_out);
      b.report["warnings"] = b.diagnostics.warnings();
      pipeline::write_bundle(b, cfg.out_dir, "validation.json");
    } else if (*report_cmd) {
      const auto cfg = report_opts.resolve();
      const auto bundle = pipeline::run_pipeline(cfg);
      pipeline::write_bundle(bundle, cfg.out_dir);
      for (const auto& w : bundle.diagnostics.warnings()) std::cerr << "warning: " << w << "\n";
    }
  } catch (const Error& e) {
    std::cerr << e.module() << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return kInternalError;
  }
  return kOk;
}
