#include "windecomp/fleet.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "windecomp/csv.hpp"
#include "windecomp/error.hpp"
#include "windecomp/summation.hpp"

namespace windecomp::fleet {

namespace {

constexpr std::string_view kModule = "fleet";

std::size_t index(Field f) noexcept { return static_cast<std::size_t>(f); }

bool parse_flag(std::string_view field, std::size_t row) {
  std::string v(field);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v.empty() || v == "false" || v == "0" || v == "no") return false;
  if (v == "true" || v == "1" || v == "yes") return true;
  throw ParseError(std::string(kModule),
                   fmt::format("invalid is_decommissioned '{}', row {}", field, row));
}

std::optional<double> positive(std::optional<double> v, std::string_view column, std::size_t row) {
  if (v && *v <= 0.0) {
    throw ParseError(std::string(kModule), fmt::format("{} must be > 0, row {}", column, row));
  }
  return v;
}

std::optional<int> year_field(std::string_view field, std::string_view column, std::size_t row) {
  auto v = csv::optional_integer(field, kModule, column, row);
  if (!v) return std::nullopt;
  if (*v <= 0 || *v > 9999) {
    throw ParseError(std::string(kModule), fmt::format("{} out of range, row {}", column, row));
  }
  return static_cast<int>(*v);
}

int commissioning_year_of(const TurbineRecord& t) {
  if (!t.commissioning_year) {
    throw DataError(std::string(kModule),
                    fmt::format("turbine {} has no commissioning year", t.id));
  }
  return *t.commissioning_year;
}

}  // namespace

std::string_view field_name(Field f) noexcept {
  switch (f) {
    case Field::HubHeight: return "hub_height";
    case Field::RotorDiameter: return "rotor_diameter";
    case Field::Capacity: return "capacity";
  }
  return "?";
}

std::optional<double> TurbineRecord::get(Field f) const noexcept {
  switch (f) {
    case Field::HubHeight: return hub_height;
    case Field::RotorDiameter: return rotor_diameter;
    case Field::Capacity: return capacity_kw;
  }
  return std::nullopt;
}

void TurbineRecord::set(Field f, double value) noexcept {
  switch (f) {
    case Field::HubHeight: hub_height = value; break;
    case Field::RotorDiameter: rotor_diameter = value; break;
    case Field::Capacity: capacity_kw = value; break;
  }
}

Fleet::Fleet(std::vector<TurbineRecord> turbines, Provenance provenance, ImputationReport imputation)
    : turbines_(std::move(turbines)), provenance_(provenance), imputation_(std::move(imputation)) {
  std::unordered_set<std::string> ids;
  for (const auto& t : turbines_) {
    if (!ids.insert(t.id).second) {
      throw DataError(std::string(kModule), fmt::format("duplicate turbine id '{}'", t.id));
    }
    if (!t.commissioning_year) {
      throw DataError(std::string(kModule), fmt::format("turbine {} has no commissioning year", t.id));
    }
    for (Field f : kImputableFields) {
      const auto v = t.get(f);
      if (!v || !(*v > 0.0)) {
        throw DataError(std::string(kModule),
                        fmt::format("turbine {} lacks a positive {}", t.id, field_name(f)));
      }
    }
    if (!(t.lon >= -180.0 && t.lon <= 180.0 && t.lat >= -90.0 && t.lat <= 90.0)) {
      throw DataError(std::string(kModule), fmt::format("turbine {} has invalid coordinates", t.id));
    }
  }
}

void ScenarioSpec::validate() const {
  if (lifetime_years && *lifetime_years <= 0) {
    throw DomainError(std::string(kModule), "lifetime must be > 0 years");
  }
}

std::vector<TurbineRecord> parse_turbine_csv(std::string_view text) {
  const auto table = csv::parse(text, kModule);
  const auto c_id = table.require_column(kModule, "case_id");
  const auto c_lon = table.require_column(kModule, "xlong");
  const auto c_lat = table.require_column(kModule, "ylat");
  const auto c_year = table.require_column(kModule, "p_year");
  const auto c_hh = table.require_column(kModule, "t_hh");
  const auto c_rd = table.require_column(kModule, "t_rd");
  const auto c_cap = table.require_column(kModule, "t_cap");
  const auto c_dec = table.require_column(kModule, "is_decommissioned");
  const auto c_dyear = table.require_column(kModule, "d_year");

  std::vector<TurbineRecord> out;
  out.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const std::size_t row = i + 1;
    TurbineRecord t;
    t.id = r[c_id];
    if (t.id.empty()) throw ParseError(std::string(kModule), fmt::format("missing case_id, row {}", row));
    t.lon = csv::number(r[c_lon], kModule, "xlong", row);
    t.lat = csv::number(r[c_lat], kModule, "ylat", row);
    if (t.lon < -180.0 || t.lon > 180.0) {
      throw ParseError(std::string(kModule), fmt::format("lon out of range, row {}", row));
    }
    if (t.lat < -90.0 || t.lat > 90.0) {
      throw ParseError(std::string(kModule), fmt::format("lat out of range, row {}", row));
    }
    t.commissioning_year = year_field(r[c_year], "p_year", row);
    t.hub_height = positive(csv::optional_number(r[c_hh], kModule, "t_hh", row), "t_hh", row);
    t.rotor_diameter = positive(csv::optional_number(r[c_rd], kModule, "t_rd", row), "t_rd", row);
    t.capacity_kw = positive(csv::optional_number(r[c_cap], kModule, "t_cap", row), "t_cap", row);
    t.decommissioned = parse_flag(r[c_dec], row);
    t.decommissioning_year = year_field(r[c_dyear], "d_year", row);
    out.push_back(std::move(t));
  }
  return out;
}

std::set<std::string> parse_exclusion_list(std::string_view text) {
  std::set<std::string> ids;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = csv::trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    if (line.empty() || line.front() == '#') continue;
    ids.insert(std::move(line));
  }
  return ids;
}

MergeResult merge_extension(std::vector<TurbineRecord> base, const std::vector<TurbineRecord>& ext) {
  MergeResult result;
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < base.size(); ++i) by_id.emplace(base[i].id, i);
  result.records = std::move(base);
  for (const auto& e : ext) {
    auto it = by_id.find(e.id);
    if (it == by_id.end()) {
      by_id.emplace(e.id, result.records.size());
      result.records.push_back(e);
      ++result.added;
      continue;
    }
    auto& b = result.records[it->second];
    bool touched = false;
    if (!b.decommissioned && e.decommissioned) {
      b.decommissioned = true;
      touched = true;
    }
    if (!b.decommissioning_year && e.decommissioning_year) {
      b.decommissioning_year = e.decommissioning_year;
      touched = true;
    }
    if (touched) ++result.updated;
  }
  return result;
}

Fleet preprocess(std::vector<TurbineRecord> records, const std::set<std::string>& exclusion_ids) {
  Provenance prov;
  prov.input_records = records.size();
  std::vector<TurbineRecord> kept;
  kept.reserve(records.size());
  for (auto& r : records) {
    if (exclusion_ids.contains(r.id)) {
      ++prov.excluded;
    } else if (!r.commissioning_year) {
      ++prov.missing_commissioning_year;
    } else {
      kept.push_back(std::move(r));
    }
  }
  if (kept.empty()) throw DataError(std::string(kModule), "no usable turbines");
  auto imputed = impute_missing(std::move(kept));
  return Fleet(std::move(imputed.records), prov, std::move(imputed.report));
}

ImputationResult impute_missing(std::vector<TurbineRecord> records) {
  struct Acc {
    CompensatedSum sum;
    std::size_t n = 0;
    double mean() const { return sum.value() / static_cast<double>(n); }
  };
  std::map<int, std::array<Acc, 3>> by_year;
  std::array<Acc, 3> global;

  ImputationReport report;
  for (const auto& r : records) {
    const int year = commissioning_year_of(r);
    auto& ym = report.per_year[year];
    ++ym.turbines;
    auto& accs = by_year[year];
    for (Field f : kImputableFields) {
      if (auto v = r.get(f)) {
        accs[index(f)].sum.add(*v);
        ++accs[index(f)].n;
        global[index(f)].sum.add(*v);
        ++global[index(f)].n;
      } else {
        ++ym.missing[index(f)];
      }
    }
  }

  for (Field f : kImputableFields) {
    const auto& g = global[index(f)];
    const bool needed = std::any_of(records.begin(), records.end(),
                                    [f](const TurbineRecord& r) { return !r.get(f); });
    if (g.n == 0) {
      if (needed) {
        throw DataError(std::string(kModule), fmt::format("{}: field never observed", field_name(f)));
      }
      continue;
    }
    report.global_mean[index(f)] = g.mean();
  }

  for (auto& r : records) {
    const int year = *r.commissioning_year;
    auto& accs = by_year[year];
    auto& ym = report.per_year[year];
    for (Field f : kImputableFields) {
      if (r.get(f)) continue;
      const auto& acc = accs[index(f)];
      double value;
      if (acc.n > 0) {
        value = acc.mean();
      } else {
        value = report.global_mean[index(f)];
        ym.used_global_mean[index(f)] = true;
      }
      r.set(f, value);
      r.imputed_fields.insert(f);
      ++report.filled;
    }
  }
  return {std::move(records), std::move(report)};
}

AreaBounds imputation_bounds(const std::vector<TurbineRecord>& records, int year) {
  struct MinMax {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    bool empty() const { return lo > hi; }
  };
  std::map<int, MinMax> cohorts;
  MinMax global;
  bool missing_any = false;
  for (const auto& r : records) {
    const int cy = commissioning_year_of(r);
    if (r.rotor_diameter && !r.imputed_fields.contains(Field::RotorDiameter)) {
      cohorts[cy].add(*r.rotor_diameter);
      global.add(*r.rotor_diameter);
    } else {
      missing_any = true;
    }
  }
  if (missing_any && global.empty()) {
    throw DataError(std::string(kModule), "rotor_diameter: field never observed");
  }

  CompensatedSum low;
  CompensatedSum high;
  for (const auto& r : records) {
    const double w = operating_weight(r, year);
    if (w == 0.0) continue;
    if (r.rotor_diameter && !r.imputed_fields.contains(Field::RotorDiameter)) {
      const double a = w * rotor_swept_area(*r.rotor_diameter);
      low.add(a);
      high.add(a);
      continue;
    }
    auto it = cohorts.find(*r.commissioning_year);
    const MinMax& mm = (it != cohorts.end() && !it->second.empty()) ? it->second : global;
    low.add(w * rotor_swept_area(mm.lo));
    high.add(w * rotor_swept_area(mm.hi));
  }
  return {low.value(), high.value()};
}

double rotor_swept_area(double diameter_m) {
  if (!(diameter_m > 0.0)) {
    throw DomainError(std::string(kModule), "rotor diameter must be > 0");
  }
  return std::numbers::pi * diameter_m * diameter_m / 4.0;
}

double operating_weight(const TurbineRecord& t, int year, const ScenarioSpec& scenario) {
  const int cy = commissioning_year_of(t);
  if (year < cy) return 0.0;
  if (scenario.drop_decommissioned_flagged && t.decommissioned) return 0.0;
  if (scenario.lifetime_years && year >= cy + *scenario.lifetime_years) return 0.0;
  return year == cy ? 0.5 : 1.0;
}

namespace {

template <typename Value>
AnnualSeries weighted_series(const Fleet& fleet, YearRange years, const ScenarioSpec& scenario,
                             Unit unit, Value value) {
  scenario.validate();
  if (years.size() <= 0) throw DataError(std::string(kModule), "empty year range");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(years.size()));
  for (int y = years.first; y <= years.last; ++y) {
    CompensatedSum s;
    for (const auto& t : fleet.turbines()) {
      const double w = operating_weight(t, y, scenario);
      if (w != 0.0) s.add(w * value(t));
    }
    out.push_back(s.value());
  }
  return AnnualSeries(years.first, std::move(out), unit);
}

}  // namespace

AnnualSeries annual_counts(const Fleet& fleet, YearRange years, const ScenarioSpec& scenario) {
  return weighted_series(fleet, years, scenario, Unit::Count, [](const TurbineRecord&) { return 1.0; });
}

AnnualSeries annual_swept_area(const Fleet& fleet, YearRange years, const ScenarioSpec& scenario) {
  return weighted_series(fleet, years, scenario, Unit::SquareMeter,
                         [](const TurbineRecord& t) { return rotor_swept_area(*t.rotor_diameter); });
}

AnnualSeries annual_capacity(const Fleet& fleet, YearRange years, const ScenarioSpec& scenario) {
  return weighted_series(fleet, years, scenario, Unit::Megawatt, [&](const TurbineRecord& t) {
    if (!scenario.impute_capacity && t.originally_missing(Field::Capacity)) return 0.0;
    return *t.capacity_kw / 1000.0;
  });
}

double specific_power(double capacity_w, double area_m2) {
  if (!(area_m2 > 0.0)) throw DomainError(std::string(kModule), "swept area must be > 0");
  return capacity_w / area_m2;
}

}  // namespace windecomp::fleet
