#include <doctest.h>

#include <cmath>
#include <vector>

#include "gridpanel/errors.hpp"
#include "gridpanel/scenarios.hpp"
#include "testutil.hpp"

using namespace gridpanel;
using testutil::MiniPlant;

namespace {

const EpochDay kYearStart = day_from_civil({2021, 1, 1});

MiniPlant two_regime_plant(double em_lo, double em_hi) {
  MiniPlant p;
  p.id = "P1";
  p.nameplate_mw = 100.0;
  p.gen.assign(8760, 10.0);
  p.em.resize(8760);
  for (int i = 0; i < 8760; ++i) p.em[std::size_t(i)] = (i % 2 == 0) ? em_lo : em_hi;
  return p;
}

ScenarioResult run_scenario(const AlignedDataset& ds, const std::string& id, int year,
                            EgridScenarioMode mode = EgridScenarioMode::PerPlant,
                            std::optional<double> category_ei = std::nullopt) {
  return scenario_emissions(*ds.find_plant(id), ds.meta.at(id), ds, year, mode, category_ei);
}

}  // namespace

TEST_CASE("two-regime plant lands at seventy percent of the high scenario") {
  auto ds = testutil::make_dataset({two_regime_plant(4.0, 10.0)}, kYearStart, 365);
  auto r = run_scenario(ds, "P1", 2021);
  CHECK(r.generation_mwh == 87600.0);
  CHECK(r.observed_t == 61320.0);
  CHECK(r.ei_p10 == 0.4);
  CHECK(r.ei_p90 == 1.0);
  CHECK(r.high_t == 87600.0);
  CHECK(r.low_t == 35040.0);
  CHECK(r.observed_t == doctest::Approx(0.7 * r.high_t).epsilon(1e-15));
  CHECK_FALSE(r.observed_outside_bounds);
  CHECK(r.diagnostic.empty());
}

TEST_CASE("constant-intensity plant collapses the scenario band") {
  auto ds = testutil::make_dataset({testutil::constant_plant("P1", 100.0, 10.0, 4.0, 365)},
                                   kYearStart, 365);
  auto r = run_scenario(ds, "P1", 2021);
  CHECK(r.observed_t == 35040.0);
  CHECK(r.high_t == r.observed_t);
  CHECK(r.low_t == r.observed_t);
  CHECK_FALSE(r.observed_outside_bounds);
}

TEST_CASE("scenario bounds from hand-set percentiles") {
  MiniPlant p;
  p.id = "P1";
  p.nameplate_mw = 100.0;
  p.gen.assign(8760, 0.0);
  p.em.assign(8760, 0.0);
  for (int i = 0; i < 10; ++i) {
    p.gen[std::size_t(i)] = 10.0;
    p.em[std::size_t(i)] = (i < 5) ? 4.0 : 8.0;
  }
  auto ds = testutil::make_dataset({p}, kYearStart, 365);
  auto r = run_scenario(ds, "P1", 2021);
  CHECK(r.generation_mwh == 100.0);
  CHECK(r.ei_p10 == 0.4);
  CHECK(r.ei_p90 == 0.8);
  CHECK(r.high_t == 80.0);
  CHECK(r.low_t == 40.0);
  CHECK(r.observed_t == 60.0);
  CHECK_FALSE(r.observed_outside_bounds);
}

TEST_CASE("scaling hourly intensity scales every scenario total") {
  auto ds1 = testutil::make_dataset({two_regime_plant(4.0, 10.0)}, kYearStart, 365);
  auto ds2 = testutil::make_dataset({two_regime_plant(8.0, 20.0)}, kYearStart, 365);
  auto a = run_scenario(ds1, "P1", 2021);
  auto b = run_scenario(ds2, "P1", 2021);
  CHECK(b.observed_t == 2.0 * a.observed_t);
  CHECK(b.high_t == 2.0 * a.high_t);
  CHECK(b.low_t == 2.0 * a.low_t);
}

TEST_CASE("generation weighting can push observed outside the band") {
  MiniPlant p;
  p.id = "P1";
  p.nameplate_mw = 2000.0;
  p.gen.assign(8760, 0.0);
  p.em.assign(8760, 0.0);
  p.gen[0] = 1000.0;
  p.em[0] = 100.0;
  for (int i = 1; i <= 9; ++i) {
    p.gen[std::size_t(i)] = 1.0;
    p.em[std::size_t(i)] = 1.0;
  }
  auto ds = testutil::make_dataset({p}, kYearStart, 365);
  auto r = run_scenario(ds, "P1", 2021);
  CHECK(r.observed_t == 109.0);
  CHECK(r.observed_t < r.low_t);
  CHECK(r.observed_outside_bounds);
}

TEST_CASE("idle plants produce a diagnosed zero result") {
  MiniPlant p;
  p.id = "P1";
  p.gen.assign(8760, 0.0);
  p.em.assign(8760, 0.0);
  auto ds = testutil::make_dataset({p}, kYearStart, 365);
  auto r = run_scenario(ds, "P1", 2021);
  CHECK(r.observed_t == 0.0);
  CHECK(r.high_t == 0.0);
  CHECK(r.low_t == 0.0);
  CHECK(std::isnan(r.ei_p10));
  CHECK(std::isnan(r.ei_p90));
  CHECK(r.diagnostic == "no operating hours in year");
}

TEST_CASE("per-plant eGRID scenario uses the plant's annual intensity") {
  MiniPlant p = testutil::constant_plant("P1", 100.0, 10.0, 4.0, 365);
  p.egrid[2021] = EgridYear{100000.0, 60000.0};
  auto ds = testutil::make_dataset({p}, kYearStart, 365);
  auto r = run_scenario(ds, "P1", 2021);
  REQUIRE(r.egrid_t.has_value());
  CHECK(*r.egrid_t == 52560.0);  // 0.6 t/MWh over 87600 MWh

  MiniPlant q = testutil::constant_plant("P1", 100.0, 10.0, 4.0, 365);
  auto ds2 = testutil::make_dataset({q}, kYearStart, 365);
  CHECK_FALSE(run_scenario(ds2, "P1", 2021).egrid_t.has_value());

  MiniPlant z = testutil::constant_plant("P1", 100.0, 10.0, 4.0, 365);
  z.egrid[2021] = EgridYear{0.0, 1000.0};
  auto ds3 = testutil::make_dataset({z}, kYearStart, 365);
  CHECK_FALSE(run_scenario(ds3, "P1", 2021).egrid_t.has_value());
}

TEST_CASE("per-category eGRID scenario applies the supplied intensity") {
  auto ds = testutil::make_dataset({testutil::constant_plant("P1", 100.0, 10.0, 4.0, 365)},
                                   kYearStart, 365);
  auto r = run_scenario(ds, "P1", 2021, EgridScenarioMode::PerCategory, 0.5);
  REQUIRE(r.egrid_t.has_value());
  CHECK(*r.egrid_t == 43800.0);
  auto none = run_scenario(ds, "P1", 2021, EgridScenarioMode::PerCategory, std::nullopt);
  CHECK_FALSE(none.egrid_t.has_value());
}

TEST_CASE("scenario preconditions are enforced") {
  auto ds = testutil::make_dataset({testutil::constant_plant("P1", 100.0, 10.0, 4.0, 365)},
                                   kYearStart, 365);
  CHECK_THROWS_AS(run_scenario(ds, "P1", 2020), DomainError);
  PlantMeta other = ds.meta.at("P1");
  other.plant_id = "P2";
  CHECK_THROWS_AS(scenario_emissions(*ds.find_plant("P1"), other, ds, 2021), IntegrityError);
}

TEST_CASE("region rollup sums members and reports deviations") {
  ScenarioResult a;
  a.plant_id = "A";
  a.year = 2021;
  a.observed_t = 100.0;
  a.high_t = 120.0;
  a.low_t = 90.0;
  a.egrid_t = 110.0;
  a.ei_p10 = 0.3;
  a.ei_p90 = 0.9;
  ScenarioResult b;
  b.plant_id = "B";
  b.year = 2021;
  b.observed_t = 200.0;
  b.high_t = 280.0;
  b.low_t = 150.0;
  b.ei_p10 = 0.4;
  b.ei_p90 = 1.1;
  ScenarioResult idle;
  idle.plant_id = "C";
  idle.year = 2021;
  idle.ei_p10 = std::nan("");
  idle.ei_p90 = std::nan("");
  idle.high_t = 999.0;  // must be ignored while percentiles are undefined
  idle.low_t = 999.0;

  std::vector<ScenarioResult> results{a, b, idle};
  auto roll = region_scenario_rollup(results, "CAISO", 2021);
  CHECK(roll.plant_count == 3);
  CHECK(roll.observed_t == 300.0);
  CHECK(roll.high_t == 400.0);
  CHECK(roll.low_t == 240.0);
  REQUIRE(roll.egrid_t.has_value());
  CHECK(*roll.egrid_t == 110.0);
  CHECK(roll.egrid_plant_count == 1);
  CHECK(roll.high_deviation_pct == doctest::Approx(100.0 / 3.0).epsilon(1e-12));
  CHECK(roll.low_deviation_pct == doctest::Approx(-20.0).epsilon(1e-12));
  CHECK(roll.egrid_deviation_pct.has_value());

  std::vector<ScenarioResult> mixed{a};
  mixed.push_back(b);
  mixed.back().year = 2020;
  CHECK_THROWS_AS(region_scenario_rollup(mixed, "CAISO", 2021), IntegrityError);
}

TEST_CASE("single-plant rollup reproduces the one-third deviation") {
  ScenarioResult r;
  r.plant_id = "P1";
  r.year = 2021;
  r.observed_t = 60.0;
  r.high_t = 80.0;
  r.low_t = 40.0;
  r.ei_p10 = 0.4;
  r.ei_p90 = 0.8;
  std::vector<ScenarioResult> one{r};
  auto roll = region_scenario_rollup(one, "CAISO", 2021);
  CHECK(roll.high_deviation_pct == doctest::Approx(33.3333333333).epsilon(1e-9));
  CHECK(roll.low_deviation_pct == doctest::Approx(-33.3333333333).epsilon(1e-9));
  CHECK_FALSE(roll.egrid_t.has_value());
}

TEST_CASE("constant-intensity fleet rolls up to zero deviation") {
  auto ds = testutil::make_dataset({testutil::constant_plant("P1", 100.0, 10.0, 4.0, 365),
                                    testutil::constant_plant("P2", 100.0, 20.0, 8.0, 365)},
                                   kYearStart, 365);
  std::vector<ScenarioResult> results{run_scenario(ds, "P1", 2021),
                                      run_scenario(ds, "P2", 2021)};
  auto roll = region_scenario_rollup(results, "CAISO", 2021);
  CHECK(roll.observed_t == roll.high_t);
  CHECK(roll.observed_t == roll.low_t);
  CHECK(roll.high_deviation_pct == 0.0);
  CHECK(roll.low_deviation_pct == 0.0);
}

TEST_CASE("annual comparison matches eGRID fixtures exactly on the identity line") {
  MiniPlant p = testutil::constant_plant("P1", 100.0, 10.0, 5.0, 365);
  p.egrid[2021] = EgridYear{87600.0, 43800.0};
  auto ds = testutil::make_dataset({p}, kYearStart, 365);
  auto row = compare_annual_cems_egrid(*ds.find_plant("P1"), ds.meta.at("P1"), ds, 2021);
  REQUIRE(row.has_value());
  CHECK(row->cems_gen_mwh == 87600.0);
  CHECK(row->cems_co2_t == 43800.0);
  CHECK(row->gen_ratio == 1.0);
  CHECK(row->co2_ratio == 1.0);
  CHECK(row->ei_ratio == 1.0);
}

TEST_CASE("annual comparison ratios against hand division") {
  MiniPlant p;
  p.id = "P1";
  p.nameplate_mw = 100.0;
  p.gen.assign(8760, 0.0);
  p.em.assign(8760, 0.0);
  for (int i = 0; i < 200; ++i) {
    p.gen[std::size_t(i)] = 0.5;
    p.em[std::size_t(i)] = 0.25;
  }
  p.egrid[2021] = EgridYear{90.0, 40.5};
  auto ds = testutil::make_dataset({p}, kYearStart, 365);
  auto row = compare_annual_cems_egrid(*ds.find_plant("P1"), ds.meta.at("P1"), ds, 2021);
  REQUIRE(row.has_value());
  CHECK(row->cems_gen_mwh == 100.0);
  CHECK(row->cems_co2_t == 50.0);
  CHECK(row->cems_ei == 0.5);
  CHECK(row->egrid_ei == 0.45);
  CHECK(row->gen_ratio == 100.0 / 90.0);
  CHECK(row->co2_ratio == 50.0 / 40.5);
  CHECK(row->ei_ratio == doctest::Approx(10.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("comparison without an eGRID year is skipped, not fatal") {
  MiniPlant p = testutil::constant_plant("P1", 100.0, 10.0, 5.0, 365);
  auto ds = testutil::make_dataset({p}, kYearStart, 365);
  CHECK_FALSE(compare_annual_cems_egrid(*ds.find_plant("P1"), ds.meta.at("P1"), ds, 2020)
                  .has_value());

  MiniPlant q = testutil::constant_plant("P1", 100.0, 10.0, 5.0, 365);
  q.egrid[2020] = EgridYear{1000.0, 400.0};
  auto ds2 = testutil::make_dataset({q}, kYearStart, 365);
  CHECK_THROWS_AS(
      compare_annual_cems_egrid(*ds2.find_plant("P1"), ds2.meta.at("P1"), ds2, 2020),
      DomainError);
}

TEST_CASE("category intensity averages plants with usable eGRID data") {
  MiniPlant a = testutil::constant_plant("A", 100.0, 10.0, 4.0, 2);
  a.egrid[2021] = EgridYear{100000.0, 40000.0};
  MiniPlant b = testutil::constant_plant("B", 100.0, 10.0, 4.0, 2);
  b.egrid[2021] = EgridYear{50000.0, 40000.0};
  MiniPlant c = testutil::constant_plant("C", 100.0, 10.0, 4.0, 2, Fuel::Coal);
  c.egrid[2021] = EgridYear{1000.0, 500.0};
  MiniPlant d = testutil::constant_plant("D", 100.0, 10.0, 4.0, 2);
  auto ds = testutil::make_dataset({a, b, c, d}, kYearStart, 2);

  auto gas = category_egrid_ei(ds, Region::CAISO, Fuel::NaturalGas, 2021);
  REQUIRE(gas.has_value());
  CHECK(*gas == doctest::Approx(0.6).epsilon(1e-12));
  auto coal = category_egrid_ei(ds, Region::CAISO, Fuel::Coal, 2021);
  REQUIRE(coal.has_value());
  CHECK(*coal == 0.5);
  CHECK_FALSE(category_egrid_ei(ds, Region::CAISO, Fuel::Other, 2021).has_value());
  CHECK_FALSE(category_egrid_ei(ds, Region::ERCOT, Fuel::NaturalGas, 2021).has_value());
}
