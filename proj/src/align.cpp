#include "gridpanel/align.hpp"

#include <algorithm>

#include "gridpanel/csv.hpp"
#include "gridpanel/errors.hpp"

#include <nlohmann/json.hpp>

namespace gridpanel {

namespace {

using nlohmann::json;

struct RegionArrays {
  std::vector<bool> present;
  Eigen::VectorXd wind, solar, hydro, demand, imports;
};

void interpolate(Eigen::VectorXd& v, Eigen::Index lo, Eigen::Index len) {
  // Anchors at lo-1 and lo+len; fills lo..lo+len-1.
  const double v0 = v[lo - 1];
  const double v1 = v[lo + len];
  for (Eigen::Index k = 1; k <= len; ++k) {
    v[lo + k - 1] = v0 + (v1 - v0) * double(k) / double(len + 1);
  }
}

}  // namespace

bool AlignedDataset::day_excluded(EpochDay day) const {
  if (excluded_days.count({primary_region, day})) return true;
  for (const auto& p : partners) {
    if (excluded_days.count({p, day})) return true;
  }
  return false;
}

const RegionHourSeries& AlignedDataset::region_series(const std::string& region_id) const {
  auto it = regions.find(region_id);
  if (it == regions.end()) {
    throw ConfigError("region series '" + region_id + "' not present in dataset");
  }
  return it->second;
}

const PlantHourSeries* AlignedDataset::find_plant(const std::string& plant_id) const {
  auto it = std::lower_bound(plants.begin(), plants.end(), plant_id,
                             [](const PlantHourSeries& s, const std::string& id) {
                               return s.plant_id < id;
                             });
  if (it == plants.end() || it->plant_id != plant_id) return nullptr;
  return &*it;
}

std::vector<EpochDay> AlignedDataset::included_days() const {
  std::vector<EpochDay> days;
  for (EpochDay d = begin_day; d <= end_day; ++d) {
    if (!day_excluded(d)) days.push_back(d);
  }
  return days;
}

AlignedDataset align_calendars(std::vector<PlantHourSeries> plants,
                               std::map<std::string, PlantMeta> meta,
                               const std::map<std::string, std::vector<RegionHourRecord>>& region_rows,
                               const std::string& primary_region,
                               const std::vector<std::string>& partners, SpanDays span,
                               int offset_minutes, const GapPolicy& gap) {
  if (span.begin_day > span.end_day) throw ConfigError("span begin is after span end");
  if (offset_minutes % 60 != 0) throw ConfigError("standard offset must be whole hours");
  if (gap.max_interp_hours < 0 || gap.max_missing_fraction < 0.0 ||
      gap.max_missing_fraction > 1.0) {
    throw ConfigError("invalid gap policy");
  }

  AlignedDataset ds;
  ds.primary_region = primary_region;
  ds.partners = partners;
  ds.offset_minutes = offset_minutes;
  ds.begin_day = span.begin_day;
  ds.end_day = span.end_day;
  ds.first_hour = day_start_hour(span.begin_day, offset_minutes);
  ds.n_hours = ds.n_days() * 24;
  const Eigen::Index H = ds.n_hours;

  std::vector<std::string> required{primary_region};
  for (const auto& p : partners) {
    if (p == primary_region) throw ConfigError("partner '" + p + "' equals the primary region");
    if (std::find(required.begin(), required.end(), p) == required.end()) required.push_back(p);
  }

  for (const auto& region_id : required) {
    auto rows_it = region_rows.find(region_id);
    if (rows_it == region_rows.end() || rows_it->second.empty()) {
      if (region_id == primary_region) {
        throw DataQualityError("no region series rows for primary region " + region_id);
      }
      throw ConfigError("configured trading partner '" + region_id + "' has no region series");
    }

    RegionArrays a;
    a.present.assign(std::size_t(H), false);
    a.wind = Eigen::VectorXd::Zero(H);
    a.solar = Eigen::VectorXd::Zero(H);
    a.hydro = Eigen::VectorXd::Zero(H);
    a.demand = Eigen::VectorXd::Zero(H);
    a.imports = Eigen::VectorXd::Zero(H);

    Eigen::Index present_count = 0;
    for (const auto& row : rows_it->second) {
      const EpochHour idx64 = row.hour - ds.first_hour;
      if (idx64 < 0 || idx64 >= H) continue;
      const auto i = Eigen::Index(idx64);
      a.present[std::size_t(i)] = true;
      ++present_count;
      a.wind[i] = row.wind_mwh;
      a.solar[i] = row.solar_mwh;
      a.hydro[i] = row.hydro_mwh;
      a.demand[i] = row.demand_mwh;
      a.imports[i] = row.net_imports_mwh;
    }

    const Eigen::Index missing = H - present_count;
    if (double(missing) > gap.max_missing_fraction * double(H)) {
      throw DataQualityError("region " + region_id + " is missing " + std::to_string(missing) +
                             " of " + std::to_string(H) + " hours in the span (limit " +
                             std::to_string(gap.max_missing_fraction * 100.0) + "%)");
    }

    Eigen::Index i = 0;
    while (i < H) {
      if (a.present[std::size_t(i)]) {
        ++i;
        continue;
      }
      Eigen::Index j = i;
      while (j < H && !a.present[std::size_t(j)]) ++j;
      const Eigen::Index len = j - i;
      const bool interior = i > 0 && j < H;
      if (interior && len <= gap.max_interp_hours) {
        interpolate(a.wind, i, len);
        interpolate(a.solar, i, len);
        interpolate(a.hydro, i, len);
        interpolate(a.demand, i, len);
        interpolate(a.imports, i, len);
      } else {
        const EpochDay d0 = ds.begin_day + i / 24;
        const EpochDay d1 = ds.begin_day + (j - 1) / 24;
        const std::string reason = interior
                                       ? "region gap of " + std::to_string(len) + " hours"
                                       : "edge gap of " + std::to_string(len) + " hours";
        for (EpochDay d = d0; d <= d1; ++d) {
          if (ds.excluded_days.insert({region_id, d}).second) {
            ds.exclusions.push_back({region_id, d, reason});
          }
        }
      }
      i = j;
    }

    RegionHourSeries series;
    series.region_id = region_id;
    series.hours.resize(std::size_t(H));
    for (Eigen::Index h = 0; h < H; ++h) series.hours[std::size_t(h)] = ds.first_hour + h;
    series.wind_mwh = std::move(a.wind);
    series.solar_mwh = std::move(a.solar);
    series.hydro_mwh = std::move(a.hydro);
    series.demand_mwh = std::move(a.demand);
    series.net_imports_mwh = std::move(a.imports);
    ds.regions.emplace(region_id, std::move(series));
  }

  std::sort(plants.begin(), plants.end(), [](const PlantHourSeries& x, const PlantHourSeries& y) {
    return x.plant_id < y.plant_id;
  });
  for (std::size_t p = 0; p + 1 < plants.size(); ++p) {
    if (plants[p].plant_id == plants[p + 1].plant_id) {
      throw IntegrityError("duplicate plant series for " + plants[p].plant_id);
    }
  }
  for (auto& src : plants) {
    auto meta_it = meta.find(src.plant_id);
    if (meta_it == meta.end()) {
      throw IntegrityError("plant " + src.plant_id + " has hourly data but no metadata");
    }
    PlantHourSeries dst;
    dst.plant_id = src.plant_id;
    dst.nameplate_mw = meta_it->second.nameplate_mw;
    dst.hours.resize(std::size_t(H));
    for (Eigen::Index h = 0; h < H; ++h) dst.hours[std::size_t(h)] = ds.first_hour + h;
    dst.generation_mwh = Eigen::VectorXd::Zero(H);
    dst.emissions_t = Eigen::VectorXd::Zero(H);
    for (std::size_t k = 0; k < src.hours.size(); ++k) {
      const EpochHour idx64 = src.hours[k] - ds.first_hour;
      if (idx64 < 0 || idx64 >= H) continue;
      const auto i = Eigen::Index(idx64);
      dst.generation_mwh[i] = src.generation_mwh[Eigen::Index(k)];
      dst.emissions_t[i] = src.emissions_t[Eigen::Index(k)];
    }
    for (Eigen::Index i = 0; i < H; ++i) {
      if (dst.generation_mwh[i] > dst.nameplate_mw) dst.over_capacity.push_back(i);
    }
    ds.plants.push_back(std::move(dst));
  }
  ds.meta = std::move(meta);

  std::sort(ds.exclusions.begin(), ds.exclusions.end(),
            [](const ExclusionEntry& x, const ExclusionEntry& y) {
              return std::tie(x.region_id, x.day) < std::tie(y.region_id, y.day);
            });
  return ds;
}

void save_dataset(const AlignedDataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  {
    const std::vector<std::string> cols{"region_id", "timestamp", "wind_mwh",
                                        "solar_mwh", "hydro_mwh", "demand_mwh",
                                        "net_imports_mwh"};
    CsvWriter w(dir / "aligned_region.csv", cols);
    for (const auto& [region_id, s] : ds.regions) {
      for (Eigen::Index i = 0; i < s.size(); ++i) {
        const std::vector<std::string> row{
            region_id,
            format_timestamp(s.hours[std::size_t(i)], ds.offset_minutes),
            format_double(s.wind_mwh[i]),
            format_double(s.solar_mwh[i]),
            format_double(s.hydro_mwh[i]),
            format_double(s.demand_mwh[i]),
            format_double(s.net_imports_mwh[i])};
        w.row(row);
      }
    }
    w.close();
  }

  {
    const std::vector<std::string> cols{"plant_id", "timestamp", "generation_mwh", "emissions_t"};
    CsvWriter w(dir / "aligned_plants.csv", cols);
    for (const auto& p : ds.plants) {
      for (Eigen::Index i = 0; i < p.size(); ++i) {
        const std::vector<std::string> row{
            p.plant_id, format_timestamp(p.hours[std::size_t(i)], ds.offset_minutes),
            format_double(p.generation_mwh[i]), format_double(p.emissions_t[i])};
        w.row(row);
      }
    }
    w.close();
  }

  {
    const std::vector<std::string> cols{"plant_id", "region",        "fuel",
                                        "nameplate_mw", "year",      "egrid_gen_mwh",
                                        "egrid_co2_t"};
    CsvWriter w(dir / "plants_meta.csv", cols);
    for (const auto& [plant_id, m] : ds.meta) {
      const std::string base_region{region_name(m.region)};
      const std::string base_fuel{fuel_name(m.fuel)};
      const std::string cap = format_double(m.nameplate_mw);
      if (m.egrid.empty()) {
        const std::vector<std::string> row{plant_id, base_region, base_fuel, cap, "", "", ""};
        w.row(row);
      } else {
        for (const auto& [year, e] : m.egrid) {
          const std::vector<std::string> row{
              plant_id,           base_region,
              base_fuel,          cap,
              std::to_string(year), format_double(e.generation_mwh),
              format_double(e.co2_tonnes)};
          w.row(row);
        }
      }
    }
    w.close();
  }

  {
    const std::vector<std::string> cols{"region_id", "date", "reason"};
    CsvWriter w(dir / "exclusions.csv", cols);
    for (const auto& e : ds.exclusions) {
      const std::vector<std::string> row{e.region_id, format_date(civil_from_day(e.day)), e.reason};
      w.row(row);
    }
    w.close();
  }

  json j;
  j["schema_version"] = 1;
  j["primary_region"] = ds.primary_region;
  j["partners"] = ds.partners;
  j["offset_minutes"] = ds.offset_minutes;
  j["span"] = {{"begin", format_date(civil_from_day(ds.begin_day))},
               {"end", format_date(civil_from_day(ds.end_day))}};
  std::ofstream out(dir / "dataset.json");
  if (!out) throw IoError("cannot write " + (dir / "dataset.json").string());
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failure on " + (dir / "dataset.json").string());
}

AlignedDataset load_dataset(const std::filesystem::path& dir) {
  const auto meta_path = dir / "dataset.json";
  std::ifstream in(meta_path);
  if (!in) throw MissingInputError("dataset metadata not found: " + meta_path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IntegrityError(meta_path.string() + ": " + e.what());
  }

  AlignedDataset ds;
  try {
    ds.primary_region = j.at("primary_region").get<std::string>();
    ds.partners = j.at("partners").get<std::vector<std::string>>();
    ds.offset_minutes = j.at("offset_minutes").get<int>();
    auto begin = parse_date(j.at("span").at("begin").get<std::string>());
    auto end = parse_date(j.at("span").at("end").get<std::string>());
    if (!begin || !end) throw IntegrityError(meta_path.string() + ": invalid span dates");
    ds.begin_day = day_from_civil(*begin);
    ds.end_day = day_from_civil(*end);
  } catch (const json::exception& e) {
    throw IntegrityError(meta_path.string() + ": " + e.what());
  }
  ds.first_hour = day_start_hour(ds.begin_day, ds.offset_minutes);
  ds.n_hours = ds.n_days() * 24;
  const Eigen::Index H = ds.n_hours;

  auto plants_table = read_csv_file(dir / "plants_meta.csv");
  auto plants_parsed = parse_plants(plants_table);
  if (!plants_parsed.rejects.empty()) {
    throw IntegrityError("corrupt dataset: plants_meta.csv row rejected: " +
                         plants_parsed.rejects.front().reason);
  }
  ds.meta = std::move(plants_parsed.plants);

  auto region_table = read_csv_file(dir / "aligned_region.csv");
  auto region_parsed = parse_region_hours(region_table);
  if (!region_parsed.rejects.empty()) {
    throw IntegrityError("corrupt dataset: aligned_region.csv row rejected: " +
                         region_parsed.rejects.front().reason);
  }
  for (auto& [region_id, rows] : region_parsed.by_region) {
    if (Eigen::Index(rows.size()) != H) {
      throw IntegrityError("corrupt dataset: region " + region_id + " has " +
                           std::to_string(rows.size()) + " hours, expected " + std::to_string(H));
    }
    RegionHourSeries s;
    s.region_id = region_id;
    s.hours.resize(std::size_t(H));
    s.wind_mwh.resize(H);
    s.solar_mwh.resize(H);
    s.hydro_mwh.resize(H);
    s.demand_mwh.resize(H);
    s.net_imports_mwh.resize(H);
    for (Eigen::Index i = 0; i < H; ++i) {
      const auto& r = rows[std::size_t(i)];
      if (r.hour != ds.first_hour + i) {
        throw IntegrityError("corrupt dataset: region " + region_id + " hours not contiguous");
      }
      s.hours[std::size_t(i)] = r.hour;
      s.wind_mwh[i] = r.wind_mwh;
      s.solar_mwh[i] = r.solar_mwh;
      s.hydro_mwh[i] = r.hydro_mwh;
      s.demand_mwh[i] = r.demand_mwh;
      s.net_imports_mwh[i] = r.net_imports_mwh;
    }
    ds.regions.emplace(region_id, std::move(s));
  }
  if (!ds.regions.count(ds.primary_region)) {
    throw IntegrityError("corrupt dataset: primary region series missing");
  }
  for (const auto& p : ds.partners) {
    if (!ds.regions.count(p)) {
      throw IntegrityError("corrupt dataset: partner series '" + p + "' missing");
    }
  }

  auto plant_table = read_csv_file(dir / "aligned_plants.csv");
  const std::size_t c_plant = plant_table.require_column("plant_id");
  const std::size_t c_time = plant_table.require_column("timestamp");
  const std::size_t c_gen = plant_table.require_column("generation_mwh");
  const std::size_t c_em = plant_table.require_column("emissions_t");
  std::map<std::string, PlantHourSeries> by_plant;
  for (std::size_t r = 0; r < plant_table.rows.size(); ++r) {
    const auto& row = plant_table.rows[r];
    if (row.size() != plant_table.columns.size()) {
      throw IntegrityError("corrupt dataset: aligned_plants.csv line " + std::to_string(r + 2));
    }
    TimestampParse ts = parse_timestamp(row[c_time]);
    double gen = 0.0, em = 0.0;
    if (!ts.ok || !parse_double(row[c_gen], gen) || !parse_double(row[c_em], em)) {
      throw IntegrityError("corrupt dataset: aligned_plants.csv line " + std::to_string(r + 2));
    }
    auto& s = by_plant[row[c_plant]];
    if (s.hours.empty()) {
      s.plant_id = row[c_plant];
      auto meta_it = ds.meta.find(s.plant_id);
      if (meta_it == ds.meta.end()) {
        throw IntegrityError("corrupt dataset: plant " + s.plant_id + " missing metadata");
      }
      s.nameplate_mw = meta_it->second.nameplate_mw;
      s.hours.resize(std::size_t(H));
      for (Eigen::Index i = 0; i < H; ++i) s.hours[std::size_t(i)] = ds.first_hour + i;
      s.generation_mwh = Eigen::VectorXd::Zero(H);
      s.emissions_t = Eigen::VectorXd::Zero(H);
    }
    const EpochHour idx64 = ts.hour - ds.first_hour;
    if (idx64 < 0 || idx64 >= H) {
      throw IntegrityError("corrupt dataset: plant hour outside span at line " +
                           std::to_string(r + 2));
    }
    s.generation_mwh[Eigen::Index(idx64)] = gen;
    s.emissions_t[Eigen::Index(idx64)] = em;
  }
  for (auto& [plant_id, s] : by_plant) {
    for (Eigen::Index i = 0; i < H; ++i) {
      if (s.generation_mwh[i] > s.nameplate_mw) s.over_capacity.push_back(i);
    }
    ds.plants.push_back(std::move(s));
  }

  auto excl_table = read_csv_file(dir / "exclusions.csv");
  const std::size_t e_region = excl_table.require_column("region_id");
  const std::size_t e_date = excl_table.require_column("date");
  const std::size_t e_reason = excl_table.require_column("reason");
  for (const auto& row : excl_table.rows) {
    if (row.size() != excl_table.columns.size()) {
      throw IntegrityError("corrupt dataset: exclusions.csv ragged row");
    }
    auto date = parse_date(row[e_date]);
    if (!date) throw IntegrityError("corrupt dataset: exclusions.csv bad date " + row[e_date]);
    const EpochDay day = day_from_civil(*date);
    ds.exclusions.push_back({row[e_region], day, row[e_reason]});
    ds.excluded_days.insert({row[e_region], day});
  }
  return ds;
}

}  // namespace gridpanel
