#include "gridpanel/panel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "gridpanel/csv.hpp"
#include "gridpanel/errors.hpp"

namespace gridpanel {

const std::array<std::string, kNumCovariates>& covariate_names() {
  static const std::array<std::string, kNumCovariates> names{
      "thermal_generation", "solar",      "wind",  "wind_ramp",   "solar_ext",
      "wind_ext",           "demand_ext", "hydro", "net_imports", "residual_demand"};
  return names;
}

int covariate_index(std::string_view name) {
  const auto& names = covariate_names();
  for (int i = 0; i < kNumCovariates; ++i) {
    if (names[std::size_t(i)] == name) return i;
  }
  throw ConfigError("unknown covariate '" + std::string(name) + "'");
}

const char* zero_policy_name(ZeroPolicy policy) {
  return policy == ZeroPolicy::Drop ? "drop" : "floor";
}

ZeroPolicy parse_zero_policy(std::string_view name) {
  if (name == "drop") return ZeroPolicy::Drop;
  if (name == "floor") return ZeroPolicy::Floor;
  throw ConfigError("unknown zero policy '" + std::string(name) + "' (expected drop or floor)");
}

std::vector<RegionDayCovariates> daily_covariates(const RegionHourSeries& primary,
                                                  const std::vector<const RegionHourSeries*>& partners,
                                                  EpochHour first_hour,
                                                  std::span<const EpochDay> days,
                                                  int offset_minutes) {
  std::vector<RegionDayCovariates> out;
  out.reserve(days.size());
  for (const EpochDay day : days) {
    const EpochHour lo64 = day_start_hour(day, offset_minutes) - first_hour;
    if (lo64 < 0 || lo64 + 24 > primary.size()) {
      throw DomainError("day " + format_date(civil_from_day(day)) + " outside the aligned span");
    }
    const auto lo = Eigen::Index(lo64);

    RegionDayCovariates c;
    c.day = day;
    const CivilDate cd = civil_from_day(day);
    c.month = cd.month;
    c.year = cd.year;

    double solar = 0.0, wind = 0.0, hydro = 0.0, demand = 0.0, imports = 0.0, ramp = 0.0;
    for (Eigen::Index h = 0; h < 24; ++h) {
      solar += primary.solar_mwh[lo + h];
      wind += primary.wind_mwh[lo + h];
      hydro += primary.hydro_mwh[lo + h];
      demand += primary.demand_mwh[lo + h];
      imports += primary.net_imports_mwh[lo + h];
      if (h > 0) ramp += std::abs(primary.wind_mwh[lo + h] - primary.wind_mwh[lo + h - 1]);
    }
    double solar_ext = 0.0, wind_ext = 0.0, demand_ext = 0.0;
    for (const RegionHourSeries* p : partners) {
      if (lo + 24 > p->size()) {
        throw DomainError("partner series " + p->region_id + " shorter than the span");
      }
      for (Eigen::Index h = 0; h < 24; ++h) {
        solar_ext += p->solar_mwh[lo + h];
        wind_ext += p->wind_mwh[lo + h];
        demand_ext += p->demand_mwh[lo + h];
      }
    }

    c.demand = demand;
    c.covariates[kSolar] = solar;
    c.covariates[kWind] = wind;
    c.covariates[kWindRamp] = ramp;
    c.covariates[kSolarExt] = solar_ext;
    c.covariates[kWindExt] = wind_ext;
    c.covariates[kDemandExt] = demand_ext;
    c.covariates[kHydro] = hydro;
    c.covariates[kNetImports] = imports;
    c.covariates[kResidualDemand] = demand - hydro + imports;
    out.push_back(c);
  }
  return out;
}

namespace {

// Modeled plants (after filter) and the full regional thermal fleet.
struct RegionPlants {
  std::vector<const PlantHourSeries*> fleet;
  std::vector<const PlantHourSeries*> modeled;
};

RegionPlants select_plants(const AlignedDataset& ds, const std::vector<std::string>& filter) {
  auto region = parse_region(ds.primary_region);
  if (!region) {
    throw ConfigError("primary region '" + ds.primary_region +
                      "' is not a plant region (expected CAISO, ERCOT, or OTHER)");
  }
  RegionPlants sel;
  std::set<std::string> wanted(filter.begin(), filter.end());
  for (const auto& p : ds.plants) {
    const PlantMeta& m = ds.meta.at(p.plant_id);
    if (m.region != *region) continue;
    sel.fleet.push_back(&p);
    if (wanted.empty() || wanted.count(p.plant_id)) sel.modeled.push_back(&p);
  }
  for (const auto& id : wanted) {
    const PlantHourSeries* p = ds.find_plant(id);
    if (!p) throw ConfigError("plant filter names unknown plant '" + id + "'");
    if (ds.meta.at(id).region != *region) {
      throw ConfigError("plant filter names plant '" + id + "' outside region " +
                        ds.primary_region);
    }
  }
  if (sel.fleet.empty()) {
    throw DomainError("no plants in region " + ds.primary_region);
  }
  return sel;
}

}  // namespace

DailyPanel build_daily_panel(const AlignedDataset& ds, const std::vector<std::string>& filter,
                             bool leave_one_out) {
  if (ds.partners.empty()) {
    throw ConfigError("no trading partners configured for region " + ds.primary_region);
  }
  RegionPlants sel = select_plants(ds, filter);

  const std::vector<EpochDay> days = ds.included_days();
  std::vector<const RegionHourSeries*> partner_series;
  for (const auto& pid : ds.partners) partner_series.push_back(&ds.region_series(pid));

  std::vector<RegionDayCovariates> cov = daily_covariates(
      ds.region_series(ds.primary_region), partner_series, ds.first_hour, days, ds.offset_minutes);

  // Thermal fleet generation per day, plants in sorted-id order.
  for (std::size_t d = 0; d < days.size(); ++d) {
    const auto lo = Eigen::Index(day_start_hour(days[d], ds.offset_minutes) - ds.first_hour);
    double g = 0.0;
    for (const PlantHourSeries* p : sel.fleet) {
      for (Eigen::Index h = 0; h < 24; ++h) g += p->generation_mwh[lo + h];
    }
    cov[d].covariates[kGThermal] = g;
  }

  DailyPanel panel;
  panel.region = ds.primary_region;
  panel.rows.reserve(sel.modeled.size() * days.size());
  for (const PlantHourSeries* p : sel.modeled) {
    for (std::size_t d = 0; d < days.size(); ++d) {
      const auto lo = Eigen::Index(day_start_hour(days[d], ds.offset_minutes) - ds.first_hour);
      double gen = 0.0, em = 0.0;
      for (Eigen::Index h = 0; h < 24; ++h) {
        gen += p->generation_mwh[lo + h];
        em += p->emissions_t[lo + h];
      }
      PanelRow row;
      row.plant_id = p->plant_id;
      row.time = days[d];
      row.month = cov[d].month;
      row.year = cov[d].year;
      row.y_generation = gen;
      row.y_emissions = em;
      row.zero_generation = !(gen > 0.0);
      row.demand = cov[d].demand;
      row.covariates = cov[d].covariates;
      if (leave_one_out) row.covariates[kGThermal] -= gen;
      panel.rows.push_back(std::move(row));
    }
  }
  return panel;
}

HourlyDesign build_hourly_design(const AlignedDataset& ds, const std::string& plant_id) {
  if (ds.partners.empty()) {
    throw ConfigError("no trading partners configured for region " + ds.primary_region);
  }
  const PlantHourSeries* plant = ds.find_plant(plant_id);
  if (!plant) throw MissingInputError("plant '" + plant_id + "' not in dataset");
  RegionPlants sel = select_plants(ds, {});

  const RegionHourSeries& primary = ds.region_series(ds.primary_region);
  std::vector<const RegionHourSeries*> partner_series;
  for (const auto& pid : ds.partners) partner_series.push_back(&ds.region_series(pid));

  HourlyDesign design;
  design.region = ds.primary_region;
  design.plant_id = plant_id;
  design.rows.reserve(std::size_t(ds.n_hours > 0 ? ds.n_hours - 1 : 0));

  for (Eigen::Index i = 1; i < ds.n_hours; ++i) {
    const EpochHour hour = ds.first_hour + i;
    const EpochDay day = local_day(hour, ds.offset_minutes);
    if (ds.day_excluded(day)) continue;

    PanelRow row;
    row.plant_id = plant_id;
    row.time = hour;
    const CivilDate cd = civil_from_day(day);
    row.month = cd.month;
    row.year = cd.year;
    row.y_generation = plant->generation_mwh[i];
    row.y_emissions = plant->emissions_t[i];
    row.zero_generation = !(row.y_generation > 0.0);
    row.demand = primary.demand_mwh[i];

    double g = 0.0;
    for (const PlantHourSeries* p : sel.fleet) g += p->generation_mwh[i];
    row.covariates[kGThermal] = g;
    row.covariates[kSolar] = primary.solar_mwh[i];
    row.covariates[kWind] = primary.wind_mwh[i];
    row.covariates[kWindRamp] = std::abs(primary.wind_mwh[i] - primary.wind_mwh[i - 1]);
    double sx = 0.0, wx = 0.0, dx = 0.0;
    for (const RegionHourSeries* p : partner_series) {
      sx += p->solar_mwh[i];
      wx += p->wind_mwh[i];
      dx += p->demand_mwh[i];
    }
    row.covariates[kSolarExt] = sx;
    row.covariates[kWindExt] = wx;
    row.covariates[kDemandExt] = dx;
    row.covariates[kHydro] = primary.hydro_mwh[i];
    row.covariates[kNetImports] = primary.net_imports_mwh[i];
    row.covariates[kResidualDemand] =
        primary.demand_mwh[i] - primary.hydro_mwh[i] + primary.net_imports_mwh[i];
    design.rows.push_back(std::move(row));
  }
  return design;
}

namespace {

std::vector<std::string> panel_columns(bool hourly) {
  std::vector<std::string> cols{
      "region", "plant_id", hourly ? "timestamp" : "date",
      "month",  "year",     "y_generation_mwh",
      "y_emissions_t", "y_ei_t_per_mwh", "zero_generation", "demand_mwh"};
  for (const auto& name : covariate_names()) cols.push_back(name);
  return cols;
}

void write_rows(CsvWriter& w, const std::string& region, std::span<const PanelRow> rows,
                bool hourly, int offset_minutes) {
  for (const auto& r : rows) {
    std::vector<std::string> f;
    f.reserve(10 + kNumCovariates);
    f.push_back(region);
    f.push_back(r.plant_id);
    f.push_back(hourly ? format_timestamp(r.time, offset_minutes)
                       : format_date(civil_from_day(r.time)));
    f.push_back(std::to_string(r.month));
    f.push_back(std::to_string(r.year));
    f.push_back(format_double(r.y_generation));
    f.push_back(format_double(r.y_emissions));
    f.push_back(r.zero_generation ? "" : format_double(r.y_ei()));
    f.push_back(r.zero_generation ? "1" : "0");
    f.push_back(format_double(r.demand));
    for (int c = 0; c < kNumCovariates; ++c) f.push_back(format_double(r.covariates[std::size_t(c)]));
    w.row(f);
  }
}

struct ParsedRows {
  std::string region;
  std::vector<PanelRow> rows;
};

ParsedRows read_rows(const std::filesystem::path& path, bool hourly) {
  CsvTable table = read_csv_file(path);
  const std::size_t c_region = table.require_column("region");
  const std::size_t c_plant = table.require_column("plant_id");
  const std::size_t c_time = table.require_column(hourly ? "timestamp" : "date");
  const std::size_t c_month = table.require_column("month");
  const std::size_t c_year = table.require_column("year");
  const std::size_t c_gen = table.require_column("y_generation_mwh");
  const std::size_t c_em = table.require_column("y_emissions_t");
  const std::size_t c_zero = table.require_column("zero_generation");
  const std::size_t c_demand = table.require_column("demand_mwh");
  std::array<std::size_t, kNumCovariates> c_cov{};
  for (int c = 0; c < kNumCovariates; ++c) {
    c_cov[std::size_t(c)] = table.require_column(covariate_names()[std::size_t(c)]);
  }

  ParsedRows out;
  out.rows.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string where = path.string() + " line " + std::to_string(i + 2);
    if (row.size() != table.columns.size()) throw SchemaError(where + ": ragged row");
    PanelRow r;
    r.plant_id = row[c_plant];
    if (out.rows.empty()) {
      out.region = row[c_region];
    } else if (row[c_region] != out.region) {
      throw SchemaError(where + ": multiple regions in one panel file");
    }
    if (hourly) {
      TimestampParse ts = parse_timestamp(row[c_time]);
      if (!ts.ok) throw SchemaError(where + ": " + ts.error);
      r.time = ts.hour;
    } else {
      auto date = parse_date(row[c_time]);
      if (!date) throw SchemaError(where + ": bad date '" + row[c_time] + "'");
      r.time = day_from_civil(*date);
    }
    std::int64_t month = 0, year = 0;
    if (!parse_int64(row[c_month], month) || !parse_int64(row[c_year], year)) {
      throw SchemaError(where + ": bad month/year");
    }
    r.month = int(month);
    r.year = int(year);
    if (!parse_double(row[c_gen], r.y_generation) || !parse_double(row[c_em], r.y_emissions) ||
        !parse_double(row[c_demand], r.demand)) {
      throw SchemaError(where + ": bad numeric field");
    }
    r.zero_generation = row[c_zero] == "1";
    for (int c = 0; c < kNumCovariates; ++c) {
      if (!parse_double(row[c_cov[std::size_t(c)]], r.covariates[std::size_t(c)])) {
        throw SchemaError(where + ": bad covariate " + covariate_names()[std::size_t(c)]);
      }
    }
    out.rows.push_back(std::move(r));
  }
  if (out.rows.empty()) throw SchemaError(path.string() + ": no data rows");
  return out;
}

}  // namespace

void write_panel_csv(const DailyPanel& panel, const std::filesystem::path& path) {
  CsvWriter w(path, panel_columns(false));
  write_rows(w, panel.region, panel.rows, false, 0);
  w.close();
}

DailyPanel read_panel_csv(const std::filesystem::path& path) {
  ParsedRows parsed = read_rows(path, false);
  return DailyPanel{std::move(parsed.region), std::move(parsed.rows)};
}

void write_hourly_design_csv(const HourlyDesign& design, const std::filesystem::path& path,
                             int offset_minutes) {
  CsvWriter w(path, panel_columns(true));
  write_rows(w, design.region, design.rows, true, offset_minutes);
  w.close();
}

HourlyDesign read_hourly_design_csv(const std::filesystem::path& path) {
  ParsedRows parsed = read_rows(path, true);
  HourlyDesign design;
  design.region = std::move(parsed.region);
  design.rows = std::move(parsed.rows);
  if (!design.rows.empty()) design.plant_id = design.rows.front().plant_id;
  for (const auto& r : design.rows) {
    if (r.plant_id != design.plant_id) {
      throw SchemaError(path.string() + ": hourly design mixes plants");
    }
  }
  return design;
}

TransformedPanel log_transform(std::span<const PanelRow> rows, const std::string& region,
                               ZeroPolicy policy, double wind_ramp_floor) {
  TransformedPanel t;
  t.region = region;
  t.policy = policy;
  t.wind_ramp_floor = wind_ramp_floor;
  if (rows.empty()) return t;

  double imports_min = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) imports_min = std::min(imports_min, r.covariates[kNetImports]);
  t.imports_shift = imports_min - 1.0;

  std::set<std::string> entities;
  std::set<int> months, years;
  std::vector<const PanelRow*> kept;
  kept.reserve(rows.size());

  for (const auto& r : rows) {
    std::array<double, kNumCovariates> cov = r.covariates;
    cov[kWindRamp] = std::max(cov[kWindRamp], wind_ramp_floor);
    cov[kNetImports] -= t.imports_shift;
    double gen = r.y_generation;
    double em = r.y_emissions;

    if (policy == ZeroPolicy::Drop) {
      bool bad = !(gen > 0.0) || !(em > 0.0);
      for (int c = 0; c < kNumCovariates && !bad; ++c) {
        if (!(cov[std::size_t(c)] > 0.0)) bad = true;
      }
      if (bad) {
        ++t.removed_rows;
        continue;
      }
    } else {
      gen = std::max(gen, 1.0);
      em = std::max(em, 1.0);
      for (int c = 0; c < kNumCovariates; ++c) {
        if (c == kNetImports) continue;  // already shifted to >= 1
        cov[std::size_t(c)] = std::max(cov[std::size_t(c)], 1.0);
      }
    }
    kept.push_back(&r);
    entities.insert(r.plant_id);
    months.insert(r.month);
    years.insert(r.year);
  }

  t.entity_levels.assign(entities.begin(), entities.end());
  t.month_levels.assign(months.begin(), months.end());
  t.year_levels.assign(years.begin(), years.end());

  auto entity_code = [&](const std::string& id) {
    return std::int32_t(std::lower_bound(t.entity_levels.begin(), t.entity_levels.end(), id) -
                        t.entity_levels.begin());
  };
  auto month_code = [&](int m) {
    return std::int32_t(std::lower_bound(t.month_levels.begin(), t.month_levels.end(), m) -
                        t.month_levels.begin());
  };
  auto year_code = [&](int y) {
    return std::int32_t(std::lower_bound(t.year_levels.begin(), t.year_levels.end(), y) -
                        t.year_levels.begin());
  };

  const auto n = Eigen::Index(kept.size());
  t.covariates.resize(n, kNumCovariates);
  t.dependents.resize(n, 3);
  t.entity.reserve(kept.size());
  t.month.reserve(kept.size());
  t.year.reserve(kept.size());
  t.time.reserve(kept.size());

  for (Eigen::Index i = 0; i < n; ++i) {
    const PanelRow& r = *kept[std::size_t(i)];
    std::array<double, kNumCovariates> cov = r.covariates;
    cov[kWindRamp] = std::max(cov[kWindRamp], wind_ramp_floor);
    cov[kNetImports] -= t.imports_shift;
    double gen = r.y_generation;
    double em = r.y_emissions;
    if (policy == ZeroPolicy::Floor) {
      gen = std::max(gen, 1.0);
      em = std::max(em, 1.0);
      for (int c = 0; c < kNumCovariates; ++c) {
        if (c == kNetImports) continue;
        cov[std::size_t(c)] = std::max(cov[std::size_t(c)], 1.0);
      }
    }
    for (int c = 0; c < kNumCovariates; ++c) {
      t.covariates(i, c) = std::log(cov[std::size_t(c)]);
    }
    const double lg = std::log(gen);
    const double le = std::log(em);
    t.dependents(i, 0) = lg;
    t.dependents(i, 1) = le;
    t.dependents(i, 2) = le - lg;
    t.entity.push_back(entity_code(r.plant_id));
    t.month.push_back(month_code(r.month));
    t.year.push_back(year_code(r.year));
    t.time.push_back(r.time);
  }
  return t;
}

}  // namespace gridpanel
