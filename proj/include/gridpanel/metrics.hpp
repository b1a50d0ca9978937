#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridpanel/align.hpp"
#include "gridpanel/records.hpp"

namespace gridpanel {

struct EiCfPoint {
  double capacity_factor = 0.0;
  double emissions_intensity = 0.0;
};

struct EiCfBin {
  double center = 0.0;
  double mean_ei = 0.0;
  std::int64_t count = 0;
};

// Scatter and binned view of emissions intensity against capacity factor,
// over operating hours only (generation > 0).
struct EiCfCurve {
  std::string plant_id;
  std::vector<EiCfPoint> points;
  std::vector<EiCfBin> binned;  // width 0.05, left-closed, terminal bin holds CF >= 1
  double p10_cf = 0.0;
  std::string diagnostic;  // non-empty when the curve is empty

  bool empty() const { return points.empty(); }
};

EiCfCurve ei_cf_curve(const PlantHourSeries& series);

struct CfPredicate {
  double threshold = 0.0;
  bool greater = true;  // true: CF > threshold, false: CF < threshold
};

// Arithmetic mean of hourly EI over operating hours matching the predicate.
double conditional_mean_ei(const PlantHourSeries& series, CfPredicate predicate);

// Per local-standard day: max hourly output minus min hourly output, over the
// hours actually present (MWh per hour read as MW).
std::map<EpochDay, double> daily_ramp(const PlantHourSeries& series, int offset_minutes);

struct HourRamp {
  EpochHour hour = 0;  // the later hour of the pair
  double delta_mw = 0.0;
};

// value(t) - value(t-1) for contiguous hour pairs; nothing across gaps.
std::vector<HourRamp> intra_hour_ramp(const PlantHourSeries& series);

struct HourlyProfile {
  std::array<double, 24> generation_mwh{};
  std::array<double, 24> emissions_t{};
  std::array<double, 24> intensity{};  // ratio of means, not mean of ratios
  std::array<std::int64_t, 24> count{};
};

HourlyProfile hourly_profile(std::span<const PlantHourSeries* const> group, int offset_minutes);

struct RegionYearTotals {
  double generation_mwh = 0.0;
  double emissions_t = 0.0;
};

struct FleetSummary {
  Region region = Region::OTHER;
  Fuel fuel = Fuel::Other;
  int year = 0;
  std::int64_t plant_count = 0;
  double installed_gw = 0.0;
  double generation_share_pct = 0.0;
  double emissions_share_pct = 0.0;
  double mean_ei = 0.0;  // cross-plant mean of annual EI
  double sd_ei = 0.0;    // NaN when fewer than two plants with defined EI
  double mean_cf = 0.0;  // fraction, not percent
  double sd_cf = 0.0;
};

// Totals default to the sum over all ingested plants of the region-year.
FleetSummary fleet_summary(const AlignedDataset& dataset, Region region, Fuel fuel, int year,
                           std::optional<RegionYearTotals> region_totals = std::nullopt);

}  // namespace gridpanel
