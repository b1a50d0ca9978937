#include "gridpanel/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "gridpanel/errors.hpp"
#include "gridpanel/stats.hpp"

namespace gridpanel {

namespace {

std::pair<Eigen::Index, Eigen::Index> year_range(const AlignedDataset& ds, int year) {
  const EpochDay y0 = day_from_civil({year, 1, 1});
  const EpochDay y1 = day_from_civil({year, 12, 31});
  if (y0 < ds.begin_day || y1 > ds.end_day) {
    throw DomainError("year " + std::to_string(year) + " is not fully covered by the dataset span");
  }
  const Eigen::Index lo = Eigen::Index(y0 - ds.begin_day) * 24;
  const Eigen::Index hi = Eigen::Index(y1 - ds.begin_day + 1) * 24;
  return {lo, hi};
}

}  // namespace

ScenarioResult scenario_emissions(const PlantHourSeries& series, const PlantMeta& meta,
                                  const AlignedDataset& ds, int year, EgridScenarioMode egrid_mode,
                                  std::optional<double> category_ei) {
  if (series.plant_id != meta.plant_id) {
    throw IntegrityError("scenario_emissions: series/meta plant mismatch");
  }
  const auto [lo, hi] = year_range(ds, year);

  ScenarioResult r;
  r.plant_id = series.plant_id;
  r.year = year;

  std::vector<double> eis;
  double gen_total = 0.0;
  double em_total = 0.0;
  for (Eigen::Index i = lo; i < hi; ++i) {
    gen_total += series.generation_mwh[i];
    em_total += series.emissions_t[i];
    if (series.generation_mwh[i] > 0.0) eis.push_back(series.intensity(i));
  }
  r.generation_mwh = gen_total;
  r.observed_t = em_total;

  if (eis.empty()) {
    r.diagnostic = "no operating hours in year";
    r.ei_p10 = std::nan("");
    r.ei_p90 = std::nan("");
    return r;
  }

  std::sort(eis.begin(), eis.end());
  const Eigen::Map<const Eigen::VectorXd> sorted(eis.data(), Eigen::Index(eis.size()));
  r.ei_p10 = quantile_sorted(sorted, 0.1);
  r.ei_p90 = quantile_sorted(sorted, 0.9);
  r.high_t = r.ei_p90 * gen_total;
  r.low_t = r.ei_p10 * gen_total;
  r.observed_outside_bounds = r.observed_t < r.low_t || r.observed_t > r.high_t;

  switch (egrid_mode) {
    case EgridScenarioMode::PerPlant: {
      auto it = meta.egrid.find(year);
      if (it != meta.egrid.end() && it->second.generation_mwh > 0.0) {
        r.egrid_t = it->second.intensity() * gen_total;
      }
      break;
    }
    case EgridScenarioMode::PerCategory: {
      if (category_ei) r.egrid_t = *category_ei * gen_total;
      break;
    }
  }
  return r;
}

RegionScenarioRollup region_scenario_rollup(std::span<const ScenarioResult> results,
                                            const std::string& region, int year) {
  RegionScenarioRollup roll;
  roll.region = region;
  roll.year = year;
  double egrid_sum = 0.0;
  for (const auto& r : results) {
    if (r.year != year) {
      throw IntegrityError("rollup: result for year " + std::to_string(r.year) +
                           " mixed into year " + std::to_string(year));
    }
    roll.plant_count += 1;
    roll.observed_t += r.observed_t;
    if (!std::isnan(r.ei_p90)) {
      roll.high_t += r.high_t;
      roll.low_t += r.low_t;
    }
    if (r.egrid_t) {
      egrid_sum += *r.egrid_t;
      roll.egrid_plant_count += 1;
    }
  }
  if (roll.egrid_plant_count > 0) roll.egrid_t = egrid_sum;

  if (roll.observed_t > 0.0) {
    roll.high_deviation_pct = 100.0 * (roll.high_t - roll.observed_t) / roll.observed_t;
    roll.low_deviation_pct = 100.0 * (roll.low_t - roll.observed_t) / roll.observed_t;
    if (roll.egrid_t) {
      roll.egrid_deviation_pct = 100.0 * (*roll.egrid_t - roll.observed_t) / roll.observed_t;
    }
  } else {
    roll.high_deviation_pct = std::nan("");
    roll.low_deviation_pct = std::nan("");
  }
  return roll;
}

std::optional<CemsEgridRow> compare_annual_cems_egrid(const PlantHourSeries& series,
                                                      const PlantMeta& meta,
                                                      const AlignedDataset& ds, int year) {
  auto it = meta.egrid.find(year);
  if (it == meta.egrid.end()) return std::nullopt;
  const auto [lo, hi] = year_range(ds, year);

  CemsEgridRow row;
  row.plant_id = series.plant_id;
  row.year = year;
  row.cems_gen_mwh = series.generation_mwh.segment(lo, hi - lo).sum();
  row.cems_co2_t = series.emissions_t.segment(lo, hi - lo).sum();
  row.egrid_gen_mwh = it->second.generation_mwh;
  row.egrid_co2_t = it->second.co2_tonnes;
  row.cems_ei = row.cems_gen_mwh > 0.0 ? row.cems_co2_t / row.cems_gen_mwh : std::nan("");
  row.egrid_ei = it->second.generation_mwh > 0.0 ? it->second.intensity() : std::nan("");
  row.gen_ratio = row.egrid_gen_mwh > 0.0 ? row.cems_gen_mwh / row.egrid_gen_mwh : std::nan("");
  row.co2_ratio = row.egrid_co2_t > 0.0 ? row.cems_co2_t / row.egrid_co2_t : std::nan("");
  row.ei_ratio = row.egrid_ei > 0.0 ? row.cems_ei / row.egrid_ei : std::nan("");
  return row;
}

std::optional<double> category_egrid_ei(const AlignedDataset& ds, Region region, Fuel fuel,
                                        int year) {
  double sum = 0.0;
  std::int64_t n = 0;
  for (const auto& [plant_id, m] : ds.meta) {
    if (m.region != region || m.fuel != fuel) continue;
    auto it = m.egrid.find(year);
    if (it == m.egrid.end() || it->second.generation_mwh <= 0.0) continue;
    sum += it->second.intensity();
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / double(n);
}

}  // namespace gridpanel
