#include <doctest.h>

#include <cmath>
#include <numbers>

#include "windecomp/error.hpp"
#include "windecomp/fleet.hpp"
#include "windecomp/synth.hpp"

using namespace windecomp;
using namespace windecomp::fleet;

namespace {

const std::string kHeader = "case_id,xlong,ylat,p_year,t_hh,t_rd,t_cap,is_decommissioned,d_year\n";

TurbineRecord turbine(std::string id, int year, std::optional<double> rd = 100.0, std::optional<double> hh = 80.0,
                      std::optional<double> cap = 2000.0) {
  TurbineRecord t;
  t.id = std::move(id);
  t.lon = -100.0;
  t.lat = 40.0;
  t.commissioning_year = year;
  t.rotor_diameter = rd;
  t.hub_height = hh;
  t.capacity_kw = cap;
  return t;
}

std::vector<double> values(const AnnualSeries& s) { return s.values(); }

}  // namespace

TEST_CASE("parse_turbine_csv maps fields") {
  const auto rows = parse_turbine_csv(kHeader + "T1,-100.0,40.0,2012,80,100,2000,false,\n"
                                                "T2,-100.0,40.0,2012,,,,false,\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].id == "T1");
  CHECK(rows[0].lon == -100.0);
  CHECK(rows[0].lat == 40.0);
  CHECK(rows[0].commissioning_year == 2012);
  CHECK(rows[0].hub_height == 80.0);
  CHECK(rows[0].rotor_diameter == 100.0);
  CHECK(rows[0].capacity_kw == 2000.0);
  CHECK_FALSE(rows[0].decommissioned);
  CHECK_FALSE(rows[0].decommissioning_year.has_value());

  CHECK_FALSE(rows[1].hub_height.has_value());
  CHECK_FALSE(rows[1].rotor_diameter.has_value());
  CHECK_FALSE(rows[1].capacity_kw.has_value());
}

TEST_CASE("parse_turbine_csv rejects bad rows with row numbers") {
  const std::string good = "T1,-100.0,40.0,2012,80,100,2000,false,\n";
  try {
    parse_turbine_csv(kHeader + good + good + "T3,-200.0,40.0,2012,80,100,2000,false,\n");
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()) == "lon out of range, row 3");
  }
  CHECK_THROWS_AS(parse_turbine_csv(kHeader + "T1,-100.0,40.0,2012,80,100\n"), ParseError);
  CHECK_THROWS_WITH_AS(parse_turbine_csv(kHeader + "T1,-100.0,abc,2012,80,100,2000,false,\n"),
                       doctest::Contains("row 1"), ParseError);
  CHECK_THROWS_AS(parse_turbine_csv(kHeader + "T1,-100.0,95.0,2012,80,100,2000,false,\n"), ParseError);
}

TEST_CASE("parse_turbine_csv ignores extra columns and reads flags") {
  const auto rows = parse_turbine_csv(
      "case_id,xlong,ylat,p_year,t_hh,t_rd,t_cap,is_decommissioned,d_year,t_model\n"
      "T1,-100,40,2012,80,100,2000,true,2019,V90\r\n"
      "T2,-100,40,2012,80,100,2000,,,X\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].decommissioned);
  CHECK(rows[0].decommissioning_year == 2019);
  CHECK_FALSE(rows[1].decommissioned);
}

TEST_CASE("merge_extension") {
  SUBCASE("disjoint union") {
    const auto r = merge_extension({turbine("T1", 2010)}, {turbine("T2", 2011)});
    REQUIRE(r.records.size() == 2);
    CHECK(r.records[0].id == "T1");
    CHECK(r.records[1].id == "T2");
    CHECK(r.added == 1);
  }
  SUBCASE("decommissioning year filled from extension") {
    auto ext = turbine("T1", 2005, 50.0);
    ext.decommissioned = true;
    ext.decommissioning_year = 2015;
    const auto r = merge_extension({turbine("T1", 2010)}, {ext});
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].decommissioning_year == 2015);
    CHECK(r.records[0].decommissioned);
    // base wins for everything else
    CHECK(r.records[0].commissioning_year == 2010);
    CHECK(r.records[0].rotor_diameter == 100.0);
    CHECK(r.updated == 1);
  }
  SUBCASE("empty") {
    CHECK(merge_extension({}, {}).records.empty());
  }
}

TEST_CASE("preprocess filters and imputes") {
  auto no_year = turbine("T3", 2010);
  no_year.commissioning_year.reset();
  const auto f = preprocess({turbine("T1", 2010), turbine("T2", 2011), no_year}, {});
  CHECK(f.size() == 2);
  CHECK(f.provenance().missing_commissioning_year == 1);
  CHECK(f.provenance().excluded == 0);

  const auto g = preprocess({turbine("T1", 2010), turbine("T9", 2011)}, {"T9"});
  CHECK(g.size() == 1);
  CHECK(g.provenance().excluded == 1);

  CHECK_THROWS_WITH_AS(preprocess({no_year}, {}), "no usable turbines", DataError);
}

TEST_CASE("impute_missing uses per-year means with a global fallback") {
  SUBCASE("per-year mean") {
    const auto r = impute_missing({turbine("A", 2015, 100.0), turbine("B", 2015, 110.0),
                                   turbine("C", 2015, std::nullopt)});
    CHECK(r.records[2].rotor_diameter == 105.0);
    CHECK(r.records[2].imputed_fields == std::set<Field>{Field::RotorDiameter});
    CHECK(r.report.per_year.at(2015).share(Field::RotorDiameter) == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("fallback to the global mean") {
    const auto r = impute_missing({turbine("A", 2013, 100.0, 80.0, 1000.0), turbine("B", 2015, 100.0, 80.0, 2000.0),
                                   turbine("C", 2014, 100.0, 80.0, std::nullopt)});
    CHECK(r.records[2].capacity_kw == 1500.0);
    CHECK(r.report.per_year.at(2014).used_global_mean[static_cast<std::size_t>(Field::Capacity)]);
  }
  SUBCASE("identity without gaps") {
    const std::vector<TurbineRecord> in{turbine("A", 2013), turbine("B", 2014, 90.0)};
    const auto r = impute_missing(in);
    CHECK(r.report.filled == 0);
    for (std::size_t i = 0; i < in.size(); ++i) {
      CHECK(r.records[i].rotor_diameter == in[i].rotor_diameter);
      CHECK(r.records[i].imputed_fields.empty());
    }
    for (const auto& [year, ym] : r.report.per_year) {
      for (Field f : kImputableFields) CHECK(ym.share(f) == 0.0);
    }
  }
  SUBCASE("field never observed") {
    CHECK_THROWS_WITH_AS(impute_missing({turbine("A", 2013, std::nullopt), turbine("B", 2014, std::nullopt)}),
                         doctest::Contains("field never observed"), DataError);
  }
}

TEST_CASE("imputation_bounds brackets the mean-imputed area") {
  const std::vector<TurbineRecord> recs{turbine("A", 2015, 100.0), turbine("B", 2015, 110.0),
                                        turbine("C", 2015, std::nullopt)};
  // oracle: pi/4 * (100^2 + 110^2 + d^2) with d = 100 (low) or 110 (high)
  const auto b = imputation_bounds(recs, 2016);
  CHECK(b.low == doctest::Approx(25211.28104505809).epsilon(1e-12));
  CHECK(b.high == doctest::Approx(26860.617188192733).epsilon(1e-12));
  // commissioning year carries the 0.5 weight
  const auto half = imputation_bounds(recs, 2015);
  CHECK(half.low == doctest::Approx(b.low / 2).epsilon(1e-12));

  const Fleet f(impute_missing(recs).records);
  const double mean = annual_swept_area(f, {2016, 2016})[0];
  CHECK(b.low <= mean);
  CHECK(mean <= b.high);

  SUBCASE("nothing missing") {
    const std::vector<TurbineRecord> full{turbine("A", 2015, 100.0), turbine("B", 2015, 110.0)};
    const auto fb = imputation_bounds(full, 2016);
    CHECK(fb.low == fb.high);
    CHECK(fb.low == annual_swept_area(Fleet(full), {2016, 2016})[0]);
  }
  SUBCASE("all diameters equal") {
    const auto eb = imputation_bounds({turbine("A", 2015, 90.0), turbine("B", 2015, std::nullopt)}, 2016);
    CHECK(eb.low == eb.high);
  }
}

TEST_CASE("imputation_bounds property on random registries") {
  synth::SplitMix64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TurbineRecord> recs;
    const int n = 2 + static_cast<int>(rng.uniform() * 30);
    for (int i = 0; i < n; ++i) {
      const int year = 2010 + static_cast<int>(rng.uniform() * 5);
      std::optional<double> rd = 40.0 + 100.0 * rng.uniform();
      if (i > 0 && rng.uniform() < 0.3) rd.reset();
      recs.push_back(turbine("T" + std::to_string(i), year, rd));
    }
    const Fleet f(impute_missing(recs).records);
    const auto area = annual_swept_area(f, {2010, 2016});
    for (int y = 2010; y <= 2016; ++y) {
      const auto b = imputation_bounds(recs, y);
      CHECK(b.low <= area.at_year(y) * (1 + 1e-12));
      CHECK(area.at_year(y) <= b.high * (1 + 1e-12));
    }
  }
}

TEST_CASE("rotor_swept_area") {
  CHECK(rotor_swept_area(100.0) == doctest::Approx(7853.981633974483).epsilon(1e-14));
  CHECK(rotor_swept_area(2.0) == doctest::Approx(std::numbers::pi));
  CHECK_THROWS_AS(rotor_swept_area(0.0), DomainError);
  CHECK_THROWS_AS(rotor_swept_area(-1.0), DomainError);
}

TEST_CASE("annual_counts uses the commissioning-year weight") {
  CHECK(values(annual_counts(Fleet({turbine("A", 2010), turbine("B", 2011)}), {2010, 2011})) ==
        std::vector<double>{0.5, 1.5});
  CHECK(values(annual_counts(Fleet({}), {2010, 2012})) == std::vector<double>{0, 0, 0});
  CHECK(values(annual_counts(Fleet({turbine("A", 2010), turbine("B", 2010), turbine("C", 2010), turbine("D", 2010)}),
                             {2010, 2012})) == std::vector<double>{2, 4, 4});
}

TEST_CASE("annual_swept_area") {
  const auto one = annual_swept_area(Fleet({turbine("A", 2010)}), {2010, 2011});
  CHECK(one[0] == doctest::Approx(3926.9908169872415).epsilon(1e-12));
  CHECK(one[1] == doctest::Approx(7853.981633974483).epsilon(1e-12));
  CHECK(values(annual_swept_area(Fleet({}), {2010, 2011})) == std::vector<double>{0, 0});
  const auto two = annual_swept_area(Fleet({turbine("A", 2010), turbine("B", 2010)}), {2009, 2012});
  const auto single = annual_swept_area(Fleet({turbine("A", 2010)}), {2009, 2012});
  for (std::size_t i = 0; i < two.size(); ++i) CHECK(two[i] == 2 * single[i]);
}

TEST_CASE("aggregates are additive over disjoint fleets") {
  synth::SplitMix64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TurbineRecord> a, b;
    for (int i = 0; i < 10; ++i) {
      auto t = turbine("T" + std::to_string(i), 2008 + static_cast<int>(rng.uniform() * 6), 50 + 80 * rng.uniform());
      (rng.uniform() < 0.5 ? a : b).push_back(t);
    }
    std::vector<TurbineRecord> all = a;
    all.insert(all.end(), b.begin(), b.end());
    const YearRange yrs{2008, 2015};
    const auto sa = annual_swept_area(Fleet(a), yrs), sb = annual_swept_area(Fleet(b), yrs),
               sall = annual_swept_area(Fleet(all), yrs);
    const auto na = annual_counts(Fleet(a), yrs), nb = annual_counts(Fleet(b), yrs),
               nall = annual_counts(Fleet(all), yrs);
    for (std::size_t i = 0; i < sall.size(); ++i) {
      CHECK(sall[i] == doctest::Approx(sa[i] + sb[i]).epsilon(1e-12));
      CHECK(nall[i] == na[i] + nb[i]);
    }
  }
}

TEST_CASE("per-turbine contribution follows 0 / 0.5 / 1") {
  const auto t = turbine("A", 2012);
  CHECK(operating_weight(t, 2011) == 0.0);
  CHECK(operating_weight(t, 2012) == 0.5);
  CHECK(operating_weight(t, 2013) == 1.0);
  CHECK(operating_weight(t, 2040) == 1.0);
}

TEST_CASE("annual_capacity scenarios") {
  SUBCASE("lifetime retirement boundary") {
    const auto s = annual_capacity(Fleet({turbine("A", 2000)}), {2019, 2021}, {.lifetime_years = 20});
    CHECK(values(s) == std::vector<double>{2, 0, 0});
  }
  SUBCASE("no decommissioning is nondecreasing") {
    std::vector<TurbineRecord> ts;
    for (int i = 0; i < 8; ++i) ts.push_back(turbine("T" + std::to_string(i), 2005 + i % 4));
    ts[3].decommissioned = true;
    const auto s = annual_capacity(Fleet(ts), {2003, 2012});
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] >= s[i - 1]);
  }
  SUBCASE("flagged turbine removed for the whole span") {
    auto t = turbine("A", 2010);
    t.decommissioned = true;
    const auto s = annual_capacity(Fleet({t}), {2009, 2015}, {.drop_decommissioned_flagged = true});
    for (double v : s.values()) CHECK(v == 0.0);
  }
  SUBCASE("invalid lifetime") {
    CHECK_THROWS_AS(annual_capacity(Fleet({turbine("A", 2000)}), {2000, 2001}, {.lifetime_years = 0}), DomainError);
  }
}

TEST_CASE("longer lifetimes never lower capacity") {
  synth::SplitMix64 rng(99);
  std::vector<TurbineRecord> ts;
  for (int i = 0; i < 40; ++i) {
    ts.push_back(turbine("T" + std::to_string(i), 1990 + static_cast<int>(rng.uniform() * 30), 80.0, 80.0,
                         500 + 3000 * rng.uniform()));
  }
  const Fleet f(ts);
  for (int l1 = 1; l1 <= 30; l1 += 3) {
    const auto longer = annual_capacity(f, {1990, 2025}, {.lifetime_years = l1 + 1});
    const auto shorter = annual_capacity(f, {1990, 2025}, {.lifetime_years = l1});
    for (std::size_t i = 0; i < longer.size(); ++i) CHECK(longer[i] >= shorter[i]);
  }
}

TEST_CASE("specific_power") {
  CHECK(specific_power(2'000'000.0, 7853.98) == doctest::Approx(254.65).epsilon(1e-5));
  CHECK(specific_power(0.0, 12.0) == 0.0);
  CHECK_THROWS_AS(specific_power(1.0, 0.0), DomainError);
}

TEST_CASE("Fleet rejects broken invariants") {
  CHECK_THROWS_AS(Fleet({turbine("A", 2010), turbine("A", 2011)}), DataError);
  CHECK_THROWS_AS(Fleet({turbine("A", 2010, std::nullopt)}), DataError);
}

TEST_CASE("exclusion list parsing") {
  CHECK(parse_exclusion_list("T1\n\n# comment\n T2 \r\n") == std::set<std::string>{"T1", "T2"});
}
