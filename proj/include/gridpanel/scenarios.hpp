#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridpanel/align.hpp"
#include "gridpanel/records.hpp"

namespace gridpanel {

enum class EgridScenarioMode { PerPlant, PerCategory };

struct ScenarioResult {
  std::string plant_id;
  int year = 0;
  double observed_t = 0.0;
  double high_t = 0.0;                 // P90(EI) x annual generation
  double low_t = 0.0;                  // P10(EI) x annual generation
  std::optional<double> egrid_t;       // eGRID EI x annual generation
  double ei_p10 = 0.0;
  double ei_p90 = 0.0;
  double generation_mwh = 0.0;
  // Generation-weighted observed EI can fall outside the unweighted P10-P90
  // band; that is reported, not asserted.
  bool observed_outside_bounds = false;
  std::string diagnostic;
};

// EI percentiles over the plant's operating hours of that single year.
ScenarioResult scenario_emissions(const PlantHourSeries& series, const PlantMeta& meta,
                                  const AlignedDataset& dataset, int year,
                                  EgridScenarioMode egrid_mode = EgridScenarioMode::PerPlant,
                                  std::optional<double> category_ei = std::nullopt);

struct RegionScenarioRollup {
  std::string region;
  int year = 0;
  std::int64_t plant_count = 0;
  double observed_t = 0.0;
  double high_t = 0.0;
  double low_t = 0.0;
  std::optional<double> egrid_t;  // sum over plants with an eGRID value; see egrid_plant_count
  std::int64_t egrid_plant_count = 0;
  double high_deviation_pct = 0.0;   // 100 * (high - observed) / observed
  double low_deviation_pct = 0.0;
  std::optional<double> egrid_deviation_pct;
};

RegionScenarioRollup region_scenario_rollup(std::span<const ScenarioResult> results,
                                            const std::string& region, int year);

struct CemsEgridRow {
  std::string plant_id;
  int year = 0;
  double cems_gen_mwh = 0.0;
  double egrid_gen_mwh = 0.0;
  double cems_co2_t = 0.0;
  double egrid_co2_t = 0.0;
  double cems_ei = 0.0;
  double egrid_ei = 0.0;
  double gen_ratio = 0.0;  // cems / egrid
  double co2_ratio = 0.0;
  double ei_ratio = 0.0;
};

// nullopt (with no throw) when the plant lacks eGRID data for the year.
std::optional<CemsEgridRow> compare_annual_cems_egrid(const PlantHourSeries& series,
                                                      const PlantMeta& meta,
                                                      const AlignedDataset& dataset, int year);

// Mean annual eGRID EI across a (region, fuel) category for one year; used by
// the per-category eGRID scenario mode.
std::optional<double> category_egrid_ei(const AlignedDataset& dataset, Region region, Fuel fuel,
                                        int year);

}  // namespace gridpanel
