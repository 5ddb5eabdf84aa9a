#include <doctest.h>

#include "fixture.hpp"
#include "windecomp/config.hpp"
#include "windecomp/error.hpp"
#include "windecomp/pipeline.hpp"

using namespace windecomp;
using namespace windecomp::pipeline;

TEST_CASE("config parsing") {
  const auto kv = parse_key_values("# comment\nturbines = a.csv\n\nstart_year=2011\nworkers = 3\n");
  const auto cfg = apply_settings({}, kv);
  CHECK(cfg.turbines == "a.csv");
  CHECK(cfg.study.first == 2011);
  CHECK(cfg.workers == 3);
  CHECK(cfg.effective_base_year() == 2011);
  CHECK_THROWS_AS(parse_key_values("bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_key_values("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(apply_settings({}, {{"workers", "many"}}), ConfigError);

  RunConfig bad;
  bad.study = {2015, 2012};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = {};
  bad.base_year = 2030;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = {};
  bad.workers = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("aggregates csv round trip") {
  const AnnualSeries one(2010, {0.5, 1.5}, Unit::Count);
  Aggregates a{one,
               AnnualSeries(2010, {10.25, 30.75}, Unit::SquareMeter),
               AnnualSeries(2010, {1, 3}, Unit::Megawatt),
               AnnualSeries(2010, {1.0 / 3.0, 2e9}, Unit::Watt),
               AnnualSeries(2010, {0.1, 0.2}, Unit::Watt),
               AnnualSeries(2010, {0.3, 0.4}, Unit::Watt),
               AnnualSeries(2010, {5.5, 6.5}, Unit::Watt)};
  const auto text = aggregates_to_csv(a);
  const auto back = aggregates_from_csv(text);
  CHECK(back.p_in.values() == a.p_in.values());
  CHECK(back.area.values() == a.area.values());
  REQUIRE(back.p_out.has_value());
  CHECK(back.p_out->values() == a.p_out->values());
  CHECK(aggregates_to_csv(back) == text);
}

TEST_CASE("pipeline end to end") {
  synth::SynthSpec spec;
  spec.years = {2012, 2014};
  spec.n_turbines = 30;
  spec.wind = synth::SinusoidalWind{};
  spec.hub_height = {80.0, 3.0};
  spec.missing_share = 0.1;
  const auto dir = testing::scratch_dir("pipeline");
  auto cfg = testing::write_fixture(spec, 21, dir);

  const auto bundle = run_pipeline(cfg);
  CHECK(bundle.report.at("schema_version") == kSchemaVersion);
  CHECK_FALSE(bundle.report.contains("workers"));
  for (const char* f : {"factors.csv", "effects.csv", "waterfall.csv", "scenarios.csv", "missingness.csv",
                        "fig3_indexed_factors.svg", "fig5_additive_effects.svg", "figA5_waterfall.svg"}) {
    CHECK_MESSAGE(bundle.files.contains(f), f);
  }
  const auto eff = bundle.report.at("trends").at("efficiency");
  CHECK(eff.dump().size() > 0);

  write_bundle(bundle, cfg.out_dir);
  CHECK(std::filesystem::exists(std::filesystem::path(cfg.out_dir) / "report.json"));
  CHECK_FALSE(std::filesystem::exists(std::filesystem::path(cfg.out_dir) / ".staging"));

  SUBCASE("worker count leaves outputs byte identical") {
    auto many = cfg;
    many.workers = 8;
    const auto other = run_pipeline(many);
    CHECK(other.report.dump() == bundle.report.dump());
    CHECK(other.files == bundle.files);
  }
  SUBCASE("missing input is a data error") {
    auto broken = cfg;
    broken.windgrid = (dir / "absent.wgrd").string();
    CHECK_THROWS_WITH_AS(run_pipeline(broken), doctest::Contains("file not found"), DataError);
  }
}

TEST_CASE("charts of nearly constant series render") {
  svg::Chart c{"flat", "year", "efficiency", {}, {}};
  c.series.push_back({"E", svg::Style::Line, {2010, 2011, 2012}, {0.3, 0.30000000000000004, 0.29999999999999999}, {}});
  const auto text = svg::render(c);
  CHECK(text.size() < 20000);
  CHECK(text.find("</svg>") != std::string::npos);
  CHECK(svg::render(c) == text);
}
