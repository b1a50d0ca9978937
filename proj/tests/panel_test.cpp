#include <doctest.h>

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "gridpanel/errors.hpp"
#include "gridpanel/panel.hpp"
#include "testutil.hpp"

using namespace gridpanel;
using testutil::make_series;

namespace {

RegionHourSeries region_series_from(const std::string& id, const std::vector<double>& wind,
                                    double solar, double hydro, double demand, double imports) {
  RegionHourSeries s;
  s.region_id = id;
  s.hours.resize(wind.size());
  for (std::size_t i = 0; i < wind.size(); ++i) s.hours[i] = EpochHour(i);
  s.wind_mwh = testutil::to_vec(wind);
  s.solar_mwh = Eigen::VectorXd::Constant(Eigen::Index(wind.size()), solar);
  s.hydro_mwh = Eigen::VectorXd::Constant(Eigen::Index(wind.size()), hydro);
  s.demand_mwh = Eigen::VectorXd::Constant(Eigen::Index(wind.size()), demand);
  s.net_imports_mwh = Eigen::VectorXd::Constant(Eigen::Index(wind.size()), imports);
  return s;
}

PanelRow make_row(std::string plant, std::int64_t time, int month, int year, double gen,
                  double em) {
  PanelRow r;
  r.plant_id = std::move(plant);
  r.time = time;
  r.month = month;
  r.year = year;
  r.y_generation = gen;
  r.y_emissions = em;
  r.zero_generation = !(gen > 0.0);
  r.demand = 1000.0;
  r.covariates.fill(100.0);
  r.covariates[kWindRamp] = 50.0;
  r.covariates[kNetImports] = -10.0;
  return r;
}

}  // namespace

TEST_CASE("daily panel rows sum the plant day") {
  auto ds = testutil::make_dataset({testutil::constant_plant("P1", 100.0, 10.0, 1.0, 2)}, 100, 2);
  auto panel = build_daily_panel(ds);
  REQUIRE(panel.rows.size() == 2);
  const auto& r = panel.rows[0];
  CHECK(r.plant_id == "P1");
  CHECK(r.time == 100);
  CHECK(r.y_generation == 240.0);
  CHECK(r.y_emissions == 24.0);
  CHECK(r.y_ei() == 0.1);
  CHECK_FALSE(r.zero_generation);
  CHECK(r.month == month_of_day(100));
  CHECK(r.year == year_of_day(100));
  // Default region constants: wind 500, solar 300, hydro 100, demand 2000, imports 50.
  CHECK(r.covariates[kGThermal] == 240.0);
  CHECK(r.covariates[kSolar] == 7200.0);
  CHECK(r.covariates[kWind] == 12000.0);
  CHECK(r.covariates[kWindRamp] == 0.0);
  CHECK(r.covariates[kHydro] == 2400.0);
  CHECK(r.covariates[kNetImports] == 1200.0);
  CHECK(r.covariates[kResidualDemand] == 48000.0 - 2400.0 + 1200.0);
  CHECK(r.covariates[kSolarExt] == 7200.0);
  CHECK(r.demand == 48000.0);
}

TEST_CASE("wind ramp sums absolute within-day changes only") {
  std::vector<double> wind(48, 100.0);
  wind[10] = 140.0;
  wind[11] = 140.0;          // day 0: up 40 at h10, down 40 at h12
  for (int h = 24; h < 48; ++h) wind[std::size_t(h)] = 900.0;  // jump at the day boundary
  auto primary = region_series_from("CAISO", wind, 0.0, 0.0, 0.0, 0.0);
  std::vector<EpochDay> days{0, 1};
  auto cov = daily_covariates(primary, {}, 0, days, 0);
  REQUIRE(cov.size() == 2);
  CHECK(cov[0].covariates[kWindRamp] == 80.0);
  CHECK(cov[1].covariates[kWindRamp] == 0.0);
  CHECK(cov[0].covariates[kWind] == 24.0 * 100.0 + 80.0);
}

TEST_CASE("residual demand is demand minus hydro plus imports") {
  std::vector<double> wind(24, 0.0);
  auto primary = region_series_from("CAISO", wind, 0.0, 30.0, 100.0, 20.0);
  std::vector<EpochDay> days{0};
  auto cov = daily_covariates(primary, {}, 0, days, 0);
  CHECK(cov[0].covariates[kResidualDemand] == 24.0 * 90.0);
}

TEST_CASE("external covariates sum over every partner") {
  std::vector<double> wind(24, 10.0);
  auto primary = region_series_from("CAISO", wind, 0.0, 0.0, 0.0, 0.0);
  auto nw = region_series_from("NW", std::vector<double>(24, 200.0), 5.0, 0.0, 40.0, 0.0);
  auto sw = region_series_from("SW", std::vector<double>(24, 300.0), 7.0, 0.0, 60.0, 0.0);
  std::vector<const RegionHourSeries*> partners{&nw, &sw};
  std::vector<EpochDay> days{0};
  auto cov = daily_covariates(primary, partners, 0, days, 0);
  CHECK(cov[0].covariates[kWindExt] == 24.0 * 500.0);
  CHECK(cov[0].covariates[kSolarExt] == 24.0 * 12.0);
  CHECK(cov[0].covariates[kDemandExt] == 24.0 * 100.0);
}

TEST_CASE("days outside the aligned span are rejected") {
  std::vector<double> wind(24, 10.0);
  auto primary = region_series_from("CAISO", wind, 0.0, 0.0, 0.0, 0.0);
  std::vector<EpochDay> days{1};
  CHECK_THROWS_AS(daily_covariates(primary, {}, 0, days, 0), DomainError);
}

TEST_CASE("thermal fleet covariate sums all region plants") {
  auto ds = testutil::make_dataset({testutil::constant_plant("A", 100.0, 10.0, 4.0, 2),
                                    testutil::constant_plant("B", 100.0, 30.0, 12.0, 2)},
                                   100, 2);
  auto panel = build_daily_panel(ds);
  REQUIRE(panel.rows.size() == 4);
  for (const auto& r : panel.rows) CHECK(r.covariates[kGThermal] == 960.0);

  auto loo = build_daily_panel(ds, {}, true);
  CHECK(loo.rows[0].plant_id == "A");
  CHECK(loo.rows[0].covariates[kGThermal] == 720.0);
  CHECK(loo.rows[2].plant_id == "B");
  CHECK(loo.rows[2].covariates[kGThermal] == 240.0);
}

TEST_CASE("plant filter narrows rows but not the fleet sum") {
  auto ds = testutil::make_dataset({testutil::constant_plant("A", 100.0, 10.0, 4.0, 2),
                                    testutil::constant_plant("B", 100.0, 30.0, 12.0, 2)},
                                   100, 2);
  std::vector<std::string> filter{"B"};
  auto panel = build_daily_panel(ds, filter);
  REQUIRE(panel.rows.size() == 2);
  CHECK(panel.rows[0].plant_id == "B");
  CHECK(panel.rows[0].covariates[kGThermal] == 960.0);

  std::vector<std::string> unknown{"Z"};
  CHECK_THROWS_AS(build_daily_panel(ds, unknown), ConfigError);
}

TEST_CASE("daily panel requires a configured partner") {
  auto ds = testutil::make_dataset({testutil::constant_plant("A", 100.0, 10.0, 4.0, 2)}, 100, 2,
                                   "CAISO", {});
  CHECK_THROWS_AS(build_daily_panel(ds), ConfigError);
  CHECK_THROWS_AS(build_hourly_design(ds, "A"), ConfigError);
}

TEST_CASE("rows are ordered by plant then time") {
  auto ds = testutil::make_dataset({testutil::constant_plant("B", 100.0, 30.0, 12.0, 2),
                                    testutil::constant_plant("A", 100.0, 10.0, 4.0, 2)},
                                   100, 2);
  auto panel = build_daily_panel(ds);
  REQUIRE(panel.rows.size() == 4);
  CHECK(panel.rows[0].plant_id == "A");
  CHECK(panel.rows[0].time == 100);
  CHECK(panel.rows[1].time == 101);
  CHECK(panel.rows[2].plant_id == "B");
}

TEST_CASE("hourly design starts at the second hour and crosses days") {
  // Wind 100 + i makes every hourly ramp exactly 1, including across midnight.
  std::map<std::string, std::vector<RegionHourRecord>> rows;
  for (int i = 0; i < 48; ++i) {
    double w = 100.0 + i;
    rows["CAISO"].push_back({"CAISO", i, w, 10.0, 20.0, 1000.0, 5.0});
    rows["NW"].push_back({"NW", i, 50.0, 1.0, 2.0, 500.0, 3.0});
  }
  std::vector<double> gen(48), em(48);
  for (int i = 0; i < 48; ++i) {
    gen[std::size_t(i)] = 10.0 + i;
    em[std::size_t(i)] = 4.0;
  }
  std::vector<PlantHourSeries> plants;
  plants.push_back(make_series("P1", 100.0, 0, gen, em));
  std::map<std::string, PlantMeta> meta;
  meta["P1"] = PlantMeta{"P1", Region::CAISO, Fuel::NaturalGas, 100.0, {}};
  auto ds = align_calendars(std::move(plants), std::move(meta), rows, "CAISO", {"NW"}, {0, 1}, 0);

  auto design = build_hourly_design(ds, "P1");
  REQUIRE(design.rows.size() == 47);
  CHECK(design.rows[0].time == 1);
  for (const auto& r : design.rows) {
    CHECK(r.covariates[kWindRamp] == 1.0);
    CHECK(r.covariates[kResidualDemand] == 1000.0 - 20.0 + 5.0);
    CHECK(r.covariates[kWindExt] == 50.0);
  }
  // Row at epoch hour 24 carries the ramp across the day boundary.
  CHECK(design.rows[23].time == 24);
  CHECK(design.rows[23].y_generation == 34.0);
  CHECK(design.rows[23].covariates[kGThermal] == 34.0);

  CHECK_THROWS_AS(build_hourly_design(ds, "NOPE"), MissingInputError);
}

TEST_CASE("drop policy removes any row with a nonpositive dependent or covariate") {
  std::vector<PanelRow> rows;
  rows.push_back(make_row("A", 100, 1, 2021, 240.0, 24.0));
  rows.push_back(make_row("A", 101, 1, 2021, 0.0, 0.0));  // zero generation
  rows.push_back(make_row("A", 102, 1, 2021, 240.0, 24.0));
  rows.back().covariates[kSolar] = 0.0;  // zero covariate
  rows.push_back(make_row("A", 103, 1, 2021, 240.0, 0.0));  // zero emissions
  rows.back().covariates[kNetImports] = -50.0;

  auto t = log_transform(rows, "CAISO", ZeroPolicy::Drop);
  CHECK(t.removed_rows == 3);
  REQUIRE(t.n() == 1);
  CHECK(t.dependents(0, 0) == std::log(240.0));
  CHECK(t.dependents(0, 1) == std::log(24.0));
  CHECK(t.dependents(0, 2) == t.dependents(0, 1) - t.dependents(0, 0));

  // The imports shift is computed over every input row, dropped or kept.
  CHECK(t.imports_shift == -51.0);
  CHECK(t.covariates(0, kNetImports) == std::log(-10.0 - t.imports_shift));
  // Wind ramp 50 is above the floor and passes through.
  CHECK(t.covariates(0, kWindRamp) == std::log(50.0));
}

TEST_CASE("floor policy keeps rows and logs floored values") {
  std::vector<PanelRow> rows;
  rows.push_back(make_row("A", 100, 1, 2021, 240.0, 24.0));
  rows.back().covariates[kWindRamp] = 0.0;
  rows.push_back(make_row("A", 101, 1, 2021, 0.0, 0.0));
  rows.back().covariates[kSolar] = 0.5;

  auto t = log_transform(rows, "CAISO", ZeroPolicy::Floor);
  CHECK(t.removed_rows == 0);
  REQUIRE(t.n() == 2);
  CHECK(t.covariates(0, kWindRamp) == 0.0);  // floored to 1, ln 1 = 0
  CHECK(t.dependents(1, 0) == 0.0);          // gen floored to 1
  CHECK(t.dependents(1, 1) == 0.0);
  CHECK(t.covariates(1, kSolar) == 0.0);     // 0.5 floored to 1
  CHECK(t.covariates(0, kSolar) == std::log(100.0));
  // Imports: both rows at -10, shift -11 puts the minimum exactly at ln 1 = 0.
  CHECK(t.imports_shift == -11.0);
  CHECK(t.covariates(0, kNetImports) == 0.0);
}

TEST_CASE("group levels are sorted and codes are compact") {
  std::vector<PanelRow> rows;
  rows.push_back(make_row("B", 100, 3, 2022, 10.0, 5.0));
  rows.push_back(make_row("A", 100, 1, 2021, 10.0, 5.0));
  rows.push_back(make_row("B", 131, 2, 2021, 10.0, 5.0));
  auto t = log_transform(rows, "CAISO", ZeroPolicy::Drop);
  REQUIRE(t.n() == 3);
  CHECK(t.entity_levels == std::vector<std::string>{"A", "B"});
  CHECK(t.month_levels == std::vector<int>{1, 2, 3});
  CHECK(t.year_levels == std::vector<int>{2021, 2022});
  CHECK(t.entity[0] == 1);
  CHECK(t.entity[1] == 0);
  CHECK(t.month[0] == 2);
  CHECK(t.year[0] == 1);
  CHECK(t.year[1] == 0);
}

TEST_CASE("wind ramp floor parameter is honored") {
  std::vector<PanelRow> rows;
  rows.push_back(make_row("A", 100, 1, 2021, 10.0, 5.0));
  rows.back().covariates[kWindRamp] = 2.0;
  auto t = log_transform(rows, "CAISO", ZeroPolicy::Drop, 8.0);
  CHECK(t.wind_ramp_floor == 8.0);
  CHECK(t.covariates(0, kWindRamp) == std::log(8.0));
}

TEST_CASE("daily panel csv round trips bitwise") {
  auto ds = testutil::make_dataset(
      {testutil::constant_plant("P1", 100.0, 10.0 / 3.0, 1.0 / 7.0, 2)}, 100, 2);
  auto panel = build_daily_panel(ds);
  auto dir = testutil::scratch_dir("panel_roundtrip");
  write_panel_csv(panel, dir / "panel.csv");
  auto back = read_panel_csv(dir / "panel.csv");
  CHECK(back.region == panel.region);
  REQUIRE(back.rows.size() == panel.rows.size());
  for (std::size_t i = 0; i < panel.rows.size(); ++i) {
    const auto& a = panel.rows[i];
    const auto& b = back.rows[i];
    CHECK(a.plant_id == b.plant_id);
    CHECK(a.time == b.time);
    CHECK(a.month == b.month);
    CHECK(a.year == b.year);
    CHECK(a.y_generation == b.y_generation);
    CHECK(a.y_emissions == b.y_emissions);
    CHECK(a.zero_generation == b.zero_generation);
    CHECK(a.demand == b.demand);
    for (int c = 0; c < kNumCovariates; ++c) {
      CHECK(a.covariates[std::size_t(c)] == b.covariates[std::size_t(c)]);
    }
  }
}

TEST_CASE("hourly design csv round trips bitwise") {
  auto ds = testutil::make_dataset(
      {testutil::constant_plant("P1", 100.0, 10.0 / 3.0, 1.0 / 7.0, 2)}, 100, 2);
  auto design = build_hourly_design(ds, "P1");
  auto dir = testutil::scratch_dir("design_roundtrip");
  write_hourly_design_csv(design, dir / "design.csv", ds.offset_minutes);
  auto back = read_hourly_design_csv(dir / "design.csv");
  CHECK(back.plant_id == "P1");
  REQUIRE(back.rows.size() == design.rows.size());
  for (std::size_t i = 0; i < design.rows.size(); ++i) {
    CHECK(back.rows[i].time == design.rows[i].time);
    CHECK(back.rows[i].y_generation == design.rows[i].y_generation);
    for (int c = 0; c < kNumCovariates; ++c) {
      CHECK(back.rows[i].covariates[std::size_t(c)] == design.rows[i].covariates[std::size_t(c)]);
    }
  }
}

TEST_CASE("covariate names and zero policies parse both ways") {
  CHECK(covariate_index("wind_ramp") == kWindRamp);
  CHECK(covariate_index(covariate_names()[std::size_t(kResidualDemand)]) == kResidualDemand);
  CHECK_THROWS_AS(covariate_index("tide"), ConfigError);
  CHECK(parse_zero_policy("drop") == ZeroPolicy::Drop);
  CHECK(parse_zero_policy("floor") == ZeroPolicy::Floor);
  CHECK_THROWS_AS(parse_zero_policy("zero"), ConfigError);
  CHECK(std::string(zero_policy_name(ZeroPolicy::Floor)) == "floor");
}

TEST_CASE("excluded days drop rows from both panel shapes") {
  std::map<std::string, std::vector<RegionHourRecord>> rows;
  for (int i = 0; i < 72; ++i) {
    if (i >= 30 && i < 35) continue;  // 5-hour gap on day 1
    rows["CAISO"].push_back({"CAISO", i, 100.0, 10.0, 20.0, 1000.0, 5.0});
    rows["NW"].push_back({"NW", i, 50.0, 1.0, 2.0, 500.0, 3.0});
  }
  std::vector<double> gen(72, 10.0), em(72, 4.0);
  std::vector<PlantHourSeries> plants;
  plants.push_back(make_series("P1", 100.0, 0, gen, em));
  std::map<std::string, PlantMeta> meta;
  meta["P1"] = PlantMeta{"P1", Region::CAISO, Fuel::NaturalGas, 100.0, {}};
  auto ds = align_calendars(std::move(plants), std::move(meta), rows, "CAISO", {"NW"}, {0, 2}, 0);
  REQUIRE(ds.day_excluded(1));

  auto panel = build_daily_panel(ds);
  REQUIRE(panel.rows.size() == 2);
  CHECK(panel.rows[0].time == 0);
  CHECK(panel.rows[1].time == 2);

  auto design = build_hourly_design(ds, "P1");
  // 72 hours minus the first minus the 24 of the excluded day.
  CHECK(design.rows.size() == 47);
  for (const auto& r : design.rows) CHECK(local_day(r.time, 0) != 1);
}
