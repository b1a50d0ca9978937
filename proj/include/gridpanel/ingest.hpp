#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "gridpanel/csv.hpp"
#include "gridpanel/records.hpp"

namespace gridpanel {

struct RejectedRow {
  std::string file;
  std::size_t line = 0;  // 1-based, header is line 1
  std::string reason;
};

// Maps logical field names to CSV column names; unmapped fields use the
// logical name itself.
struct ColumnMap {
  std::map<std::string, std::string> names;
  const std::string& resolve(const std::string& logical) const {
    auto it = names.find(logical);
    return it == names.end() ? logical : it->second;
  }
};

struct UnitIngestResult {
  std::vector<UnitHourRecord> records;
  std::vector<RejectedRow> rejects;
};

struct PlantIngestResult {
  std::map<std::string, PlantMeta> plants;
  std::vector<RejectedRow> rejects;
};

struct RegionIngestResult {
  std::map<std::string, std::vector<RegionHourRecord>> by_region;
  std::vector<RejectedRow> rejects;
};

// Row-level problems go to the rejects report; structural problems (missing
// columns, duplicate keys) throw.
UnitIngestResult parse_unit_hours(const CsvTable& table, const ColumnMap& schema = {});
PlantIngestResult parse_plants(const CsvTable& table);
RegionIngestResult parse_region_hours(const CsvTable& table);

// Sums unit records into one plant-hour series. Heat input is validated at
// parse time but not carried further.
PlantHourSeries aggregate_units_to_plant(std::span<const UnitHourRecord> units,
                                         const PlantMeta& meta);

// Groups unit records by plant and aggregates each; every referenced plant
// must have metadata.
std::vector<PlantHourSeries> aggregate_all_plants(std::span<const UnitHourRecord> units,
                                                  const std::map<std::string, PlantMeta>& meta);

}  // namespace gridpanel
