#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "windecomp/config.hpp"
#include "windecomp/decomp.hpp"
#include "windecomp/diagnostics.hpp"
#include "windecomp/fleet.hpp"
#include "windecomp/series.hpp"
#include "windecomp/svg.hpp"
#include "windecomp/trends.hpp"
#include "windecomp/validate.hpp"
#include "windecomp/windgrid.hpp"

namespace windecomp::pipeline {

inline constexpr int kSchemaVersion = 1;

struct LoadedFleet {
  fleet::Fleet fleet;
  std::size_t extension_added = 0;
  std::size_t extension_updated = 0;
};

/// Reads turbines (+ extension, exclusions) named in the config and preprocesses them.
LoadedFleet load_fleet(const RunConfig& config);

/// Annual fleet and power series over the study years.
struct Aggregates {
  AnnualSeries n;
  AnnualSeries area;
  AnnualSeries capacity_mw;
  AnnualSeries p_in;          // hub height, actual climate
  AnnualSeries p_in_avg;      // hub height, long-term-average climate
  AnnualSeries p_in_ref_avg;  // reference height, long-term-average climate
  std::optional<AnnualSeries> p_out;

  YearRange years() const { return {n.start_year(), n.end_year()}; }
};

struct PowerRun {
  Aggregates aggregates;
  std::vector<double> monthly_p_in;  // hub height, actual climate, one per study month
  std::uint64_t calm_events = 0;
};

PowerRun compute_power(const fleet::Fleet& fleet, const windgrid::WindGrid& grid, const RunConfig& config,
                       const std::optional<MonthlySeries>& generation);

/// Tidy `year,component,value,unit` and its inverse.
std::string aggregates_to_csv(const Aggregates& a);
Aggregates aggregates_from_csv(std::string_view text);

/// Files of one run, keyed by name relative to the output directory.
struct Bundle {
  nlohmann::json report = nlohmann::json::object();
  std::map<std::string, std::string> files;
  Diagnostics diagnostics;

  /// Adds `<name>.svg` and its data as `<name>.csv`.
  void add_chart(const std::string& name, const svg::Chart& chart);
};

nlohmann::json series_json(const AnnualSeries& s);

/// Decomposition stage; requires p_out.
void add_decomposition(Bundle& bundle, const Aggregates& agg, const RunConfig& config);
/// Trend and counterfactual stage; requires p_out. Monthly series are optional.
void add_trends(Bundle& bundle, const Aggregates& agg, const std::vector<double>& monthly_p_in,
                const std::optional<MonthlySeries>& generation);
/// Scenario, missingness, imputation-bound and reference comparisons.
void add_validation(Bundle& bundle, const fleet::Fleet& fleet, const RunConfig& config,
                    const std::optional<AnnualSeries>& p_out);

/**
 * Full run: fleet, wind grid, power series, decomposition, trends and
 * validation. Returns the bundle; write_bundle puts it on disk.
 */
Bundle run_pipeline(const RunConfig& config);

/// Writes every file into `out_dir` via a staging directory, so a failure
/// leaves no partial output behind. `report.json` is written when non-empty.
void write_bundle(const Bundle& bundle, const std::string& out_dir, const std::string& report_name = "report.json");

}  // namespace windecomp::pipeline
