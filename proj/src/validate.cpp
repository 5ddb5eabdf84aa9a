#include "windecomp/validate.hpp"

#include <set>

#include <fmt/format.h>

#include "windecomp/csv.hpp"
#include "windecomp/error.hpp"

namespace windecomp::validate {

namespace {

constexpr std::string_view kModule = "validate";

std::optional<AnnualSeries> contiguous(const std::map<int, double>& values, YearRange years, Unit unit) {
  std::vector<double> out;
  for (int y = years.first; y <= years.last; ++y) {
    auto it = values.find(y);
    if (it == values.end()) return std::nullopt;
    out.push_back(it->second);
  }
  return AnnualSeries(years.first, std::move(out), unit);
}

}  // namespace

std::optional<AnnualSeries> ReferenceData::capacity(YearRange years) const {
  return contiguous(capacity_mw, years, Unit::Megawatt);
}

std::optional<AnnualSeries> ReferenceData::generation(YearRange years) const {
  return contiguous(generation_gwh, years, Unit::GigawattHour);
}

ReferenceData parse_reference_csv(std::string_view text) {
  const auto table = csv::parse(text, kModule);
  const auto c_year = table.require_column(kModule, "year");
  const auto c_cap = table.require_column(kModule, "installed_capacity_mw");
  const auto c_gen = table.require_column(kModule, "generation_gwh");
  if (table.rows.empty()) throw DataError(std::string(kModule), "no reference data");
  ReferenceData ref;
  std::set<int> seen;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const auto year = static_cast<int>(csv::integer(r[c_year], kModule, "year", i + 1));
    if (!seen.insert(year).second) {
      throw DataError(std::string(kModule), fmt::format("duplicate year {}", year));
    }
    if (auto v = csv::optional_number(r[c_cap], kModule, "installed_capacity_mw", i + 1)) ref.capacity_mw[year] = *v;
    if (auto v = csv::optional_number(r[c_gen], kModule, "generation_gwh", i + 1)) ref.generation_gwh[year] = *v;
  }
  return ref;
}

AnnualSeries relative_difference(const AnnualSeries& a, const AnnualSeries& b) {
  require_aligned(kModule, a, b);
  std::vector<double> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] == 0.0) {
      throw DataError(std::string(kModule),
                      fmt::format("reference value is zero in {}", a.start_year() + static_cast<int>(i)));
    }
    out.push_back(100.0 * (a[i] - b[i]) / b[i]);
  }
  return AnnualSeries(a.start_year(), std::move(out), Unit::Percent);
}

AnnualSeries scenario_capacity(const fleet::Fleet& fleet, YearRange years, const fleet::ScenarioSpec& spec) {
  return fleet::annual_capacity(fleet, years, spec);
}

std::vector<NamedScenario> default_scenarios() {
  std::vector<NamedScenario> out;
  out.push_back({"all_turbines", {}});
  out.push_back({"drop_decommissioned", {.drop_decommissioned_flagged = true, .lifetime_years = std::nullopt}});
  for (int life : {15, 20, 25, 30}) {
    out.push_back({fmt::format("lifetime_{}", life), {.lifetime_years = life}});
  }
  out.push_back({"discard_missing_capacity", {.lifetime_years = std::nullopt, .impute_capacity = false}});
  return out;
}

std::vector<ScenarioResult> run_scenarios(const fleet::Fleet& fleet, YearRange years,
                                          const std::vector<NamedScenario>& scenarios) {
  std::vector<ScenarioResult> out;
  out.reserve(scenarios.size());
  for (const auto& s : scenarios) out.push_back({s.name, scenario_capacity(fleet, years, s.spec)});
  return out;
}

std::string scenarios_to_csv(const std::vector<ScenarioResult>& results) {
  std::string out = "scenario,year,capacity_mw\n";
  for (const auto& r : results) {
    for (std::size_t i = 0; i < r.capacity_mw.size(); ++i) {
      out += fmt::format("{},{},{}\n", r.name, r.capacity_mw.start_year() + static_cast<int>(i),
                         format_number(r.capacity_mw[i]));
    }
  }
  return out;
}

std::vector<MissingShares> missingness_report(const std::vector<fleet::TurbineRecord>& records) {
  using fleet::Field;
  std::map<int, std::array<std::size_t, 4>> cohorts;  // operating, hh, rd, cap
  for (const auto& r : records) {
    if (!r.commissioning_year) continue;
    auto& c = cohorts[*r.commissioning_year];
    ++c[0];
    if (r.originally_missing(Field::HubHeight)) ++c[1];
    if (r.originally_missing(Field::RotorDiameter)) ++c[2];
    if (r.originally_missing(Field::Capacity)) ++c[3];
  }
  std::vector<MissingShares> out;
  if (cohorts.empty()) return out;
  std::array<std::size_t, 4> running{};
  for (int y = cohorts.begin()->first; y <= cohorts.rbegin()->first; ++y) {
    if (auto it = cohorts.find(y); it != cohorts.end()) {
      for (std::size_t k = 0; k < 4; ++k) running[k] += it->second[k];
    }
    const auto share = [&](std::size_t k) {
      return running[0] == 0 ? 0.0 : static_cast<double>(running[k]) / static_cast<double>(running[0]);
    };
    out.push_back({y, running[0], share(1), share(2), share(3), y < kFirstConfidentYear});
  }
  return out;
}

std::string missingness_to_csv(const std::vector<MissingShares>& shares) {
  std::string out = "year,operating,hub_height,rotor_diameter,capacity,low_confidence\n";
  for (const auto& s : shares) {
    out += fmt::format("{},{},{},{},{},{}\n", s.year, s.operating, format_number(s.hub_height),
                       format_number(s.rotor_diameter), format_number(s.capacity), s.low_confidence ? 1 : 0);
  }
  return out;
}

}  // namespace windecomp::validate
