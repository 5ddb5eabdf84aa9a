#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "windecomp/calendar.hpp"
#include "windecomp/series.hpp"

namespace windecomp::fleet {

/// Turbine parameters that may be missing and get imputed.
enum class Field : std::uint8_t { HubHeight, RotorDiameter, Capacity };

inline constexpr std::array<Field, 3> kImputableFields{Field::HubHeight, Field::RotorDiameter,
                                                       Field::Capacity};

std::string_view field_name(Field f) noexcept;

struct TurbineRecord {
  std::string id;
  double lon = 0.0;  // degrees east
  double lat = 0.0;  // degrees north
  std::optional<int> commissioning_year;
  std::optional<double> hub_height;      // m
  std::optional<double> rotor_diameter;  // m
  std::optional<double> capacity_kw;
  bool decommissioned = false;
  std::optional<int> decommissioning_year;
  std::set<Field> imputed_fields;

  std::optional<double> get(Field f) const noexcept;
  void set(Field f, double value) noexcept;
  /// True when the registry did not provide `f` (absent now or filled by imputation).
  bool originally_missing(Field f) const noexcept {
    return !get(f).has_value() || imputed_fields.contains(f);
  }
};

/// Counts of records removed during preprocessing.
struct Provenance {
  std::size_t input_records = 0;
  std::size_t missing_commissioning_year = 0;
  std::size_t excluded = 0;
};

/// Share of missing values among turbines commissioned in one year.
struct YearMissing {
  std::size_t turbines = 0;
  std::array<std::size_t, 3> missing{};  // indexed like kImputableFields
  std::array<bool, 3> used_global_mean{};

  double share(Field f) const noexcept {
    return turbines == 0 ? 0.0
                         : static_cast<double>(missing[static_cast<std::size_t>(f)]) /
                               static_cast<double>(turbines);
  }
};

struct ImputationReport {
  std::map<int, YearMissing> per_year;
  std::array<double, 3> global_mean{};
  std::size_t filled = 0;
};

/**
 * Preprocessed turbine registry.
 *
 * Immutable once built. Construction checks that every turbine has a
 * commissioning year and all three imputable fields, and that ids are unique.
 */
class Fleet {
 public:
  explicit Fleet(std::vector<TurbineRecord> turbines, Provenance provenance = {},
                 ImputationReport imputation = {});

  const std::vector<TurbineRecord>& turbines() const noexcept { return turbines_; }
  std::size_t size() const noexcept { return turbines_.size(); }
  bool empty() const noexcept { return turbines_.empty(); }
  const Provenance& provenance() const noexcept { return provenance_; }
  const ImputationReport& imputation() const noexcept { return imputation_; }

 private:
  std::vector<TurbineRecord> turbines_;
  Provenance provenance_;
  ImputationReport imputation_;
};

/// Assumptions for validation scenarios. The default keeps every turbine.
struct ScenarioSpec {
  bool drop_decommissioned_flagged = false;
  std::optional<int> lifetime_years;
  bool impute_capacity = true;

  void validate() const;
};

// -- ingestion ---------------------------------------------------------------

/// Parses the registry CSV (`case_id,xlong,ylat,p_year,t_hh,t_rd,t_cap,is_decommissioned,d_year`).
std::vector<TurbineRecord> parse_turbine_csv(std::string_view text);

/// Newline-separated ids; blank lines and `#` comments are skipped.
std::set<std::string> parse_exclusion_list(std::string_view text);

struct MergeResult {
  std::vector<TurbineRecord> records;
  std::size_t added = 0;    // ids only present in the extension
  std::size_t updated = 0;  // base records that took decommissioning info from the extension
};

/// Union of base and extension; base wins on duplicate ids except for
/// decommissioning fields that base leaves empty.
MergeResult merge_extension(std::vector<TurbineRecord> base, const std::vector<TurbineRecord>& ext);

/// Drops unusable/excluded records, then imputes. Throws when nothing survives.
Fleet preprocess(std::vector<TurbineRecord> records, const std::set<std::string>& exclusion_ids);

struct ImputationResult {
  std::vector<TurbineRecord> records;
  ImputationReport report;
};

/// Per-commissioning-year mean imputation with a global-mean fallback.
ImputationResult impute_missing(std::vector<TurbineRecord> records);

struct AreaBounds {
  double low = 0.0;   // m²
  double high = 0.0;  // m²
};

/**
 * Operating swept area in `year` with missing rotor diameters filled by the
 * minimum (low) or maximum (high) diameter observed in the same commissioning
 * year. Uses the same 0.5 commissioning-year weight as annual_swept_area.
 */
AreaBounds imputation_bounds(const std::vector<TurbineRecord>& records, int year);

// -- aggregates --------------------------------------------------------------

double rotor_swept_area(double diameter_m);

/// Weight of a turbine in `year`: 0 before commissioning, 0.5 in the
/// commissioning year, 1 afterwards, then scenario removals.
double operating_weight(const TurbineRecord& t, int year, const ScenarioSpec& scenario = {});

AnnualSeries annual_counts(const Fleet& fleet, YearRange years, const ScenarioSpec& scenario = {});
AnnualSeries annual_swept_area(const Fleet& fleet, YearRange years,
                               const ScenarioSpec& scenario = {});
/// Installed capacity in MW.
AnnualSeries annual_capacity(const Fleet& fleet, YearRange years, const ScenarioSpec& scenario = {});

double specific_power(double capacity_w, double area_m2);

}  // namespace windecomp::fleet
