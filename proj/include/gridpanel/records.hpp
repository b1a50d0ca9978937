#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridpanel/timeutil.hpp"

namespace gridpanel {

enum class Region { CAISO, ERCOT, OTHER };
enum class Fuel { NaturalGas, Coal, Other };

std::optional<Region> parse_region(std::string_view text);
std::string_view region_name(Region region);
std::optional<Fuel> parse_fuel(std::string_view text);
std::string_view fuel_name(Fuel fuel);

struct UnitHourRecord {
  std::string plant_id;
  std::string unit_id;
  EpochHour hour = 0;
  double gross_load_mwh = 0.0;
  double co2_tonnes = 0.0;
  double heat_input_mmbtu = 0.0;
  bool operating = false;
};

struct EgridYear {
  double generation_mwh = 0.0;
  double co2_tonnes = 0.0;
  double intensity() const { return generation_mwh > 0.0 ? co2_tonnes / generation_mwh : std::nan(""); }
};

struct PlantMeta {
  std::string plant_id;
  Region region = Region::OTHER;
  Fuel fuel = Fuel::Other;
  double nameplate_mw = 0.0;
  std::map<int, EgridYear> egrid;  // keyed by year
};

struct RegionHourRecord {
  std::string region_id;
  EpochHour hour = 0;
  double wind_mwh = 0.0;
  double solar_mwh = 0.0;
  double hydro_mwh = 0.0;
  double demand_mwh = 0.0;
  double net_imports_mwh = 0.0;
};

// Hour-indexed plant series. `hours` is strictly increasing; after calendar
// alignment it is contiguous over the analysis span with offline hours at 0.
struct PlantHourSeries {
  std::string plant_id;
  double nameplate_mw = 0.0;
  std::vector<EpochHour> hours;
  Eigen::VectorXd generation_mwh;
  Eigen::VectorXd emissions_t;
  // Indices of hours whose capacity factor exceeded 1 on ingest.
  std::vector<Eigen::Index> over_capacity;

  Eigen::Index size() const { return Eigen::Index(hours.size()); }

  double capacity_factor(Eigen::Index i) const {
    return nameplate_mw > 0.0 ? generation_mwh[i] / nameplate_mw : std::nan("");
  }

  // NaN when the hour produced nothing.
  double intensity(Eigen::Index i) const {
    return generation_mwh[i] > 0.0 ? emissions_t[i] / generation_mwh[i] : std::nan("");
  }
};

struct RegionHourSeries {
  std::string region_id;
  std::vector<EpochHour> hours;
  Eigen::VectorXd wind_mwh;
  Eigen::VectorXd solar_mwh;
  Eigen::VectorXd hydro_mwh;
  Eigen::VectorXd demand_mwh;
  Eigen::VectorXd net_imports_mwh;

  Eigen::Index size() const { return Eigen::Index(hours.size()); }
};

}  // namespace gridpanel
