#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "windecomp/calendar.hpp"
#include "windecomp/fleet.hpp"
#include "windecomp/series.hpp"

namespace windecomp::validate {

/// Years before this are reported as low confidence.
inline constexpr int kFirstConfidentYear = 2010;

/// Independent national statistics, one row per year.
struct ReferenceData {
  std::map<int, double> capacity_mw;
  std::map<int, double> generation_gwh;

  /// Contiguous series over `years`; nullopt when any year is absent.
  std::optional<AnnualSeries> capacity(YearRange years) const;
  std::optional<AnnualSeries> generation(YearRange years) const;
};

/// Parses `year,installed_capacity_mw,generation_gwh`; value columns may be empty.
ReferenceData parse_reference_csv(std::string_view text);

/// 100 · (a − b) / b per year; positive when `a` reports more.
AnnualSeries relative_difference(const AnnualSeries& a, const AnnualSeries& b);

struct NamedScenario {
  std::string name;
  fleet::ScenarioSpec spec;
};

/// Installed capacity (MW) under a scenario.
AnnualSeries scenario_capacity(const fleet::Fleet& fleet, YearRange years, const fleet::ScenarioSpec& spec);

/// Baseline, decommission-flag removal, lifetimes {15, 20, 25, 30} and
/// discarding turbines without a registry capacity.
std::vector<NamedScenario> default_scenarios();

struct ScenarioResult {
  std::string name;
  AnnualSeries capacity_mw;
};

std::vector<ScenarioResult> run_scenarios(const fleet::Fleet& fleet, YearRange years,
                                          const std::vector<NamedScenario>& scenarios);
/// Tidy CSV `scenario,year,capacity_mw`.
std::string scenarios_to_csv(const std::vector<ScenarioResult>& results);

struct MissingShares {
  int year = 0;
  std::size_t operating = 0;
  double hub_height = 0.0;
  double rotor_diameter = 0.0;
  double capacity = 0.0;
  bool low_confidence = false;
};

/**
 * Share of turbines commissioned in or before each year that lack a field in
 * the registry. Decommissioning is ignored. Imputed values count as missing.
 */
std::vector<MissingShares> missingness_report(const std::vector<fleet::TurbineRecord>& records);
std::string missingness_to_csv(const std::vector<MissingShares>& shares);

}  // namespace windecomp::validate
