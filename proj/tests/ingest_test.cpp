#include <doctest.h>

#include <string>

#include "gridpanel/errors.hpp"
#include "gridpanel/ingest.hpp"
#include "testutil.hpp"

using namespace gridpanel;

namespace {

const char* kUnitsHeader =
    "plant_id,unit_id,timestamp,gross_load_mwh,co2_tonnes,heat_input_mmbtu,operating\n";

}  // namespace

TEST_CASE("unit rows parse and reject row-level problems") {
  std::string text = std::string(kUnitsHeader) +
                     "P1,U1,2021-01-01T00:00:00Z,10,4,70,1\n"
                     "P1,U1,2021-01-01T01:00:00Z,bad,4,70,1\n"
                     "P1,U1,not-a-time,10,4,70,1\n"
                     "P1,U1,2021-01-01T02:00:00Z,10,4,70,maybe\n"
                     "P1,U1,2021-01-01T03:00:00Z,-1,4,70,1\n"
                     "P1,U1,2021-01-01T04:00:00Z,10,,70,1\n"
                     "P1,U1,2021-01-01T05:00:00Z,5,0,0,0\n"
                     "P1,U1,2021-01-01T06:00:00Z,,,,0\n";
  auto result = parse_unit_hours(read_csv_text(text));
  REQUIRE(result.records.size() == 2);
  CHECK(result.records[0].gross_load_mwh == 10.0);
  CHECK(result.records[0].operating);
  CHECK(result.rejects.size() == 6);

  // Offline with empty measurements is the documented zero convention.
  const auto& offline = result.records[1];
  CHECK_FALSE(offline.operating);
  CHECK(offline.gross_load_mwh == 0.0);
  CHECK(offline.co2_tonnes == 0.0);
}

TEST_CASE("duplicate unit-hour keys are structural") {
  std::string text = std::string(kUnitsHeader) +
                     "P1,U1,2021-01-01T00:00:00Z,10,4,70,1\n"
                     "P1,U1,2021-01-01T00:00:00Z,11,4,70,1\n";
  CHECK_THROWS_AS(parse_unit_hours(read_csv_text(text)), IntegrityError);
}

TEST_CASE("missing unit columns are schema errors") {
  CHECK_THROWS_AS(parse_unit_hours(read_csv_text("plant_id,unit_id\nP1,U1\n")), SchemaError);
}

TEST_CASE("column map renames logical unit fields") {
  std::string text =
      "facility,unit,time,load,co2,heat,on\n"
      "P1,U1,2021-01-01T00:00:00Z,10,4,70,true\n";
  ColumnMap schema;
  schema.names = {{"plant_id", "facility"}, {"unit_id", "unit"},          {"timestamp", "time"},
                  {"gross_load_mwh", "load"}, {"co2_tonnes", "co2"},
                  {"heat_input_mmbtu", "heat"}, {"operating", "on"}};
  auto result = parse_unit_hours(read_csv_text(text), schema);
  REQUIRE(result.records.size() == 1);
  CHECK(result.records[0].plant_id == "P1");
}

TEST_CASE("plant metadata parses eGRID years and rejects bad rows") {
  std::string text =
      "plant_id,region,fuel,nameplate_mw,year,egrid_gen_mwh,egrid_co2_t\n"
      "P1,CAISO,gas,500,2021,100000,40000\n"
      "P1,CAISO,gas,500,2022,90000,36000\n"
      "P2,ERCOT,coal,800,,,\n"
      "P3,NOWHERE,gas,100,,,\n"
      "P4,CAISO,vapor,100,,,\n"
      "P5,CAISO,gas,0,,,\n"
      "P6,CAISO,gas,100,2021,1000,\n";
  auto result = parse_plants(read_csv_text(text));
  REQUIRE(result.plants.size() == 2);
  const auto& p1 = result.plants.at("P1");
  CHECK(p1.region == Region::CAISO);
  CHECK(p1.fuel == Fuel::NaturalGas);
  REQUIRE(p1.egrid.size() == 2);
  CHECK(p1.egrid.at(2021).generation_mwh == 100000.0);
  CHECK(p1.egrid.at(2021).intensity() == 0.4);
  CHECK(result.plants.at("P2").egrid.empty());
  CHECK(result.rejects.size() == 4);
}

TEST_CASE("conflicting plant metadata across rows is structural") {
  std::string text =
      "plant_id,region,fuel,nameplate_mw,year,egrid_gen_mwh,egrid_co2_t\n"
      "P1,CAISO,gas,500,2021,100000,40000\n"
      "P1,ERCOT,gas,500,2022,90000,36000\n";
  CHECK_THROWS_AS(parse_plants(read_csv_text(text)), IntegrityError);
}

TEST_CASE("region rows parse with rejects and duplicate detection") {
  std::string text =
      "region_id,timestamp,wind_mwh,solar_mwh,hydro_mwh,demand_mwh,net_imports_mwh\n"
      "CAISO,2021-01-01T00:00:00Z,100,0,50,900,-20\n"
      "CAISO,2021-01-01T01:00:00Z,110,0,50,910,-20\n"
      "NW,2021-01-01T00:00:00Z,200,0,80,700,10\n"
      "CAISO,2021-01-01T02:00:00Z,bad,0,50,900,-20\n"
      "CAISO,bad-time,100,0,50,900,-20\n"
      "CAISO,2021-01-01T03:00:00Z,-5,0,50,900,-20\n";
  auto result = parse_region_hours(read_csv_text(text));
  CHECK(result.by_region.at("CAISO").size() == 2);
  CHECK(result.by_region.at("NW").size() == 1);
  CHECK(result.by_region.at("CAISO")[0].net_imports_mwh == -20.0);
  CHECK(result.rejects.size() == 3);

  std::string dup =
      "region_id,timestamp,wind_mwh,solar_mwh,hydro_mwh,demand_mwh,net_imports_mwh\n"
      "CAISO,2021-01-01T00:00:00Z,100,0,50,900,-20\n"
      "CAISO,2021-01-01T00:00:00Z,101,0,50,900,-20\n";
  CHECK_THROWS_AS(parse_region_hours(read_csv_text(dup)), IntegrityError);
}

TEST_CASE("plant aggregation sums unit values exactly") {
  std::string text = std::string(kUnitsHeader) +
                     "P1,U1,2021-01-01T00:00:00Z,10.125,4.25,70,1\n"
                     "P1,U2,2021-01-01T00:00:00Z,5.5,2.125,30,1\n"
                     "P1,U1,2021-01-01T01:00:00Z,11,4,72,1\n";
  auto units = parse_unit_hours(read_csv_text(text));
  PlantMeta meta;
  meta.plant_id = "P1";
  meta.nameplate_mw = 20.0;
  auto series = aggregate_units_to_plant(units.records, meta);
  REQUIRE(series.size() == 2);
  CHECK(series.generation_mwh[0] == 10.125 + 5.5);
  CHECK(series.emissions_t[0] == 4.25 + 2.125);
  CHECK(series.generation_mwh[1] == 11.0);

  std::map<std::string, PlantMeta> all{{"P1", meta}};
  auto plants = aggregate_all_plants(units.records, all);
  REQUIRE(plants.size() == 1);
  CHECK(plants[0].generation_mwh[0] == 15.625);
}

TEST_CASE("unit records without plant metadata are structural") {
  std::string text = std::string(kUnitsHeader) + "P9,U1,2021-01-01T00:00:00Z,10,4,70,1\n";
  auto units = parse_unit_hours(read_csv_text(text));
  std::map<std::string, PlantMeta> empty;
  CHECK_THROWS_AS(aggregate_all_plants(units.records, empty), IntegrityError);
}

TEST_CASE("ingested numerics round-trip through csv text") {
  const double gen = 10.0 / 3.0;
  const double em = 1.0 / 7.0;
  std::string text = std::string(kUnitsHeader) + "P1,U1,2021-01-01T00:00:00Z," +
                     format_double(gen) + "," + format_double(em) + ",70,1\n";
  auto result = parse_unit_hours(read_csv_text(text));
  REQUIRE(result.records.size() == 1);
  CHECK(result.records[0].gross_load_mwh == gen);
  CHECK(result.records[0].co2_tonnes == em);
}
