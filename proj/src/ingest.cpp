#include "gridpanel/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "gridpanel/errors.hpp"
#include "gridpanel/timeutil.hpp"

namespace gridpanel {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return out;
}

// empty/absent → no value; returns false only on a malformed non-empty field.
bool parse_optional_double(const std::string& field, bool& present, double& out) {
  if (field.empty()) {
    present = false;
    return true;
  }
  present = true;
  return parse_double(field, out);
}

std::string describe_duplicates(const std::set<std::string>& keys) {
  std::string msg;
  std::size_t shown = 0;
  for (const auto& k : keys) {
    if (shown == 8) {
      msg += " and " + std::to_string(keys.size() - shown) + " more";
      break;
    }
    if (shown) msg += ", ";
    msg += k;
    ++shown;
  }
  return msg;
}

}  // namespace

UnitIngestResult parse_unit_hours(const CsvTable& table, const ColumnMap& schema) {
  UnitIngestResult result;
  const std::size_t c_plant = table.require_column(schema.resolve("plant_id"));
  const std::size_t c_unit = table.require_column(schema.resolve("unit_id"));
  const std::size_t c_time = table.require_column(schema.resolve("timestamp"));
  const std::size_t c_load = table.require_column(schema.resolve("gross_load_mwh"));
  const std::size_t c_co2 = table.require_column(schema.resolve("co2_tonnes"));
  const std::size_t c_heat = table.require_column(schema.resolve("heat_input_mmbtu"));
  const std::size_t c_op = table.require_column(schema.resolve("operating"));

  std::set<std::string> seen;
  std::set<std::string> duplicates;
  const std::string file = table.source.string();

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = r + 2;
    auto reject = [&](std::string reason) {
      result.rejects.push_back({file, line, std::move(reason)});
    };
    if (row.size() != table.columns.size()) {
      reject("expected " + std::to_string(table.columns.size()) + " fields, found " +
             std::to_string(row.size()));
      continue;
    }
    UnitHourRecord rec;
    rec.plant_id = row[c_plant];
    rec.unit_id = row[c_unit];
    if (rec.plant_id.empty() || rec.unit_id.empty()) {
      reject("empty plant_id or unit_id");
      continue;
    }
    TimestampParse ts = parse_timestamp(row[c_time]);
    if (!ts.ok) {
      reject("timestamp '" + row[c_time] + "': " + ts.error);
      continue;
    }
    rec.hour = ts.hour;

    const std::string op = lower(row[c_op]);
    bool have_load = false;
    double load = 0.0;
    if (!parse_optional_double(row[c_load], have_load, load)) {
      reject("unparseable gross_load_mwh '" + row[c_load] + "'");
      continue;
    }
    if (op == "1" || op == "true") {
      rec.operating = true;
    } else if (op == "0" || op == "false") {
      rec.operating = false;
    } else if (op.empty()) {
      // CEMS exports report offline units inconsistently; infer from load.
      rec.operating = have_load && load > 0.0;
    } else {
      reject("unparseable operating flag '" + row[c_op] + "'");
      continue;
    }

    if (rec.operating && !have_load) {
      reject("operating unit with missing gross_load_mwh");
      continue;
    }
    if (have_load && load < 0.0) {
      reject("negative gross_load_mwh");
      continue;
    }
    if (!rec.operating && have_load && load != 0.0) {
      reject("offline unit with nonzero gross_load_mwh");
      continue;
    }
    rec.gross_load_mwh = have_load ? load : 0.0;

    bool have_co2 = false, have_heat = false;
    double co2 = 0.0, heat = 0.0;
    if (!parse_optional_double(row[c_co2], have_co2, co2)) {
      reject("unparseable co2_tonnes '" + row[c_co2] + "'");
      continue;
    }
    if (!parse_optional_double(row[c_heat], have_heat, heat)) {
      reject("unparseable heat_input_mmbtu '" + row[c_heat] + "'");
      continue;
    }
    if (rec.operating && !have_co2) {
      reject("operating unit with missing co2_tonnes");
      continue;
    }
    if ((have_co2 && co2 < 0.0) || (have_heat && heat < 0.0)) {
      reject("negative co2_tonnes or heat_input_mmbtu");
      continue;
    }
    rec.co2_tonnes = have_co2 ? co2 : 0.0;
    rec.heat_input_mmbtu = have_heat ? heat : 0.0;

    std::string key = rec.plant_id + "/" + rec.unit_id + "@" + std::to_string(rec.hour);
    if (!seen.insert(key).second) {
      duplicates.insert(rec.plant_id + "/" + rec.unit_id + "@" + format_timestamp(rec.hour, 0));
      continue;
    }
    result.records.push_back(std::move(rec));
  }

  if (!duplicates.empty()) {
    throw IntegrityError(file + ": duplicate (plant,unit,timestamp) rows: " +
                         describe_duplicates(duplicates));
  }
  return result;
}

PlantIngestResult parse_plants(const CsvTable& table) {
  PlantIngestResult result;
  const std::size_t c_plant = table.require_column("plant_id");
  const std::size_t c_region = table.require_column("region");
  const std::size_t c_fuel = table.require_column("fuel");
  const std::size_t c_cap = table.require_column("nameplate_mw");
  const auto c_year = table.column("year");
  const auto c_egen = table.column("egrid_gen_mwh");
  const auto c_eco2 = table.column("egrid_co2_t");
  const bool has_egrid = c_year && c_egen && c_eco2;
  const std::string file = table.source.string();

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = r + 2;
    auto reject = [&](std::string reason) {
      result.rejects.push_back({file, line, std::move(reason)});
    };
    if (row.size() != table.columns.size()) {
      reject("expected " + std::to_string(table.columns.size()) + " fields, found " +
             std::to_string(row.size()));
      continue;
    }
    const std::string& plant_id = row[c_plant];
    if (plant_id.empty()) {
      reject("empty plant_id");
      continue;
    }
    auto region = parse_region(row[c_region]);
    if (!region) {
      reject("unknown region '" + row[c_region] + "'");
      continue;
    }
    auto fuel = parse_fuel(row[c_fuel]);
    if (!fuel) {
      reject("unknown fuel '" + row[c_fuel] + "'");
      continue;
    }
    double cap = 0.0;
    if (!parse_double(row[c_cap], cap) || cap <= 0.0) {
      reject("nameplate_mw must be a positive number, got '" + row[c_cap] + "'");
      continue;
    }

    bool have_year = false;
    std::int64_t year = 0;
    if (has_egrid && !row[*c_year].empty()) {
      if (!parse_int64(row[*c_year], year) || year < 1900 || year > 2200) {
        reject("unparseable year '" + row[*c_year] + "'");
        continue;
      }
      have_year = true;
    }
    bool have_gen = false, have_co2 = false;
    double egen = 0.0, eco2 = 0.0;
    if (has_egrid) {
      if (!parse_optional_double(row[*c_egen], have_gen, egen)) {
        reject("unparseable egrid_gen_mwh '" + row[*c_egen] + "'");
        continue;
      }
      if (!parse_optional_double(row[*c_eco2], have_co2, eco2)) {
        reject("unparseable egrid_co2_t '" + row[*c_eco2] + "'");
        continue;
      }
    }
    if ((have_gen || have_co2) && !have_year) {
      reject("egrid values without a year");
      continue;
    }
    if (have_year && (!have_gen || !have_co2)) {
      reject("egrid year without both egrid_gen_mwh and egrid_co2_t");
      continue;
    }
    if (have_gen && (egen < 0.0 || eco2 < 0.0)) {
      reject("negative egrid values");
      continue;
    }

    auto it = result.plants.find(plant_id);
    if (it == result.plants.end()) {
      PlantMeta meta;
      meta.plant_id = plant_id;
      meta.region = *region;
      meta.fuel = *fuel;
      meta.nameplate_mw = cap;
      it = result.plants.emplace(plant_id, std::move(meta)).first;
    } else {
      PlantMeta& meta = it->second;
      if (meta.region != *region || meta.fuel != *fuel || meta.nameplate_mw != cap) {
        throw IntegrityError(file + " line " + std::to_string(line) + ": plant " + plant_id +
                             " redefined with conflicting region/fuel/nameplate");
      }
    }
    if (have_year) {
      auto [eit, inserted] = it->second.egrid.emplace(int(year), EgridYear{egen, eco2});
      if (!inserted) {
        throw IntegrityError(file + " line " + std::to_string(line) + ": plant " + plant_id +
                             " has duplicate egrid year " + std::to_string(year));
      }
      (void)eit;
    }
  }
  return result;
}

RegionIngestResult parse_region_hours(const CsvTable& table) {
  RegionIngestResult result;
  const std::size_t c_region = table.require_column("region_id");
  const std::size_t c_time = table.require_column("timestamp");
  const std::size_t c_wind = table.require_column("wind_mwh");
  const std::size_t c_solar = table.require_column("solar_mwh");
  const std::size_t c_hydro = table.require_column("hydro_mwh");
  const std::size_t c_demand = table.require_column("demand_mwh");
  const std::size_t c_imports = table.require_column("net_imports_mwh");
  const std::string file = table.source.string();

  std::set<std::string> seen;
  std::set<std::string> duplicates;

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = r + 2;
    auto reject = [&](std::string reason) {
      result.rejects.push_back({file, line, std::move(reason)});
    };
    if (row.size() != table.columns.size()) {
      reject("expected " + std::to_string(table.columns.size()) + " fields, found " +
             std::to_string(row.size()));
      continue;
    }
    RegionHourRecord rec;
    rec.region_id = row[c_region];
    if (rec.region_id.empty()) {
      reject("empty region_id");
      continue;
    }
    TimestampParse ts = parse_timestamp(row[c_time]);
    if (!ts.ok) {
      reject("timestamp '" + row[c_time] + "': " + ts.error);
      continue;
    }
    rec.hour = ts.hour;

    struct Field {
      std::size_t col;
      double* dst;
      const char* name;
      bool allow_negative;
    };
    const Field fields[] = {
        {c_wind, &rec.wind_mwh, "wind_mwh", false},
        {c_solar, &rec.solar_mwh, "solar_mwh", false},
        {c_hydro, &rec.hydro_mwh, "hydro_mwh", false},
        {c_demand, &rec.demand_mwh, "demand_mwh", false},
        {c_imports, &rec.net_imports_mwh, "net_imports_mwh", true},
    };
    bool ok = true;
    for (const Field& f : fields) {
      if (!parse_double(row[f.col], *f.dst)) {
        reject(std::string("unparseable ") + f.name + " '" + row[f.col] + "'");
        ok = false;
        break;
      }
      if (!f.allow_negative && *f.dst < 0.0) {
        reject(std::string("negative ") + f.name);
        ok = false;
        break;
      }
    }
    if (!ok) continue;

    std::string key = rec.region_id + "@" + std::to_string(rec.hour);
    if (!seen.insert(key).second) {
      duplicates.insert(rec.region_id + "@" + format_timestamp(rec.hour, 0));
      continue;
    }
    result.by_region[rec.region_id].push_back(rec);
  }

  if (!duplicates.empty()) {
    throw IntegrityError(file + ": duplicate (region,timestamp) rows: " +
                         describe_duplicates(duplicates));
  }
  for (auto& [id, rows] : result.by_region) {
    std::sort(rows.begin(), rows.end(),
              [](const RegionHourRecord& a, const RegionHourRecord& b) { return a.hour < b.hour; });
  }
  return result;
}

PlantHourSeries aggregate_units_to_plant(std::span<const UnitHourRecord> units,
                                         const PlantMeta& meta) {
  if (meta.nameplate_mw <= 0.0) {
    throw DomainError("plant " + meta.plant_id + ": nameplate_mw must be positive");
  }
  for (const auto& u : units) {
    if (u.plant_id != meta.plant_id) {
      throw IntegrityError("unit record for plant " + u.plant_id +
                           " passed to aggregation for plant " + meta.plant_id);
    }
  }
  // Accumulate in input order so sums are reproducible for a given file.
  std::map<EpochHour, std::pair<double, double>> by_hour;
  for (const auto& u : units) {
    auto& [gen, em] = by_hour[u.hour];
    gen += u.gross_load_mwh;
    em += u.co2_tonnes;
  }
  PlantHourSeries series;
  series.plant_id = meta.plant_id;
  series.nameplate_mw = meta.nameplate_mw;
  series.hours.reserve(by_hour.size());
  series.generation_mwh.resize(Eigen::Index(by_hour.size()));
  series.emissions_t.resize(Eigen::Index(by_hour.size()));
  Eigen::Index i = 0;
  for (const auto& [hour, sums] : by_hour) {
    series.hours.push_back(hour);
    series.generation_mwh[i] = sums.first;
    series.emissions_t[i] = sums.second;
    if (sums.first > meta.nameplate_mw) series.over_capacity.push_back(i);
    ++i;
  }
  return series;
}

std::vector<PlantHourSeries> aggregate_all_plants(std::span<const UnitHourRecord> units,
                                                  const std::map<std::string, PlantMeta>& meta) {
  std::map<std::string, std::vector<UnitHourRecord>> by_plant;
  for (const auto& u : units) by_plant[u.plant_id].push_back(u);

  std::set<std::string> unknown;
  for (const auto& [plant_id, rows] : by_plant) {
    if (!meta.count(plant_id)) unknown.insert(plant_id);
  }
  if (!unknown.empty()) {
    throw IntegrityError("unit records reference plants absent from plant metadata: " +
                         describe_duplicates(unknown));
  }
  std::vector<PlantHourSeries> out;
  out.reserve(by_plant.size());
  for (const auto& [plant_id, rows] : by_plant) {
    out.push_back(aggregate_units_to_plant(rows, meta.at(plant_id)));
  }
  return out;
}

}  // namespace gridpanel
