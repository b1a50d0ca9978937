#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gridpanel/ingest.hpp"
#include "gridpanel/records.hpp"
#include "gridpanel/timeutil.hpp"

namespace gridpanel {

struct GapPolicy {
  int max_interp_hours = 3;          // longer region gaps exclude the day(s)
  double max_missing_fraction = 0.10;  // more missing than this is fatal
};

struct SpanDays {
  EpochDay begin_day = 0;  // inclusive, in the primary region's standard time
  EpochDay end_day = 0;    // inclusive
};

struct ExclusionEntry {
  std::string region_id;
  EpochDay day = 0;
  std::string reason;
};

// All series share one contiguous hourly index covering the span; days are
// bucketed by the primary region's standard offset throughout the analysis.
struct AlignedDataset {
  std::string primary_region;
  std::vector<std::string> partners;
  int offset_minutes = 0;
  EpochDay begin_day = 0;
  EpochDay end_day = 0;
  EpochHour first_hour = 0;
  Eigen::Index n_hours = 0;

  std::vector<PlantHourSeries> plants;  // sorted by plant_id, zeros where offline
  std::map<std::string, PlantMeta> meta;
  std::map<std::string, RegionHourSeries> regions;  // primary + partners
  std::vector<ExclusionEntry> exclusions;
  std::set<std::pair<std::string, EpochDay>> excluded_days;

  Eigen::Index n_days() const { return Eigen::Index(end_day - begin_day + 1); }
  bool day_excluded(EpochDay day) const;
  const RegionHourSeries& region_series(const std::string& region_id) const;
  const PlantHourSeries* find_plant(const std::string& plant_id) const;
  // Days of the span excluded for neither the primary region nor any partner.
  std::vector<EpochDay> included_days() const;
};

AlignedDataset align_calendars(std::vector<PlantHourSeries> plants,
                               std::map<std::string, PlantMeta> meta,
                               const std::map<std::string, std::vector<RegionHourRecord>>& region_rows,
                               const std::string& primary_region,
                               const std::vector<std::string>& partners, SpanDays span,
                               int offset_minutes, const GapPolicy& gap = {});

void save_dataset(const AlignedDataset& dataset, const std::filesystem::path& dir);
AlignedDataset load_dataset(const std::filesystem::path& dir);

}  // namespace gridpanel
