#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "gridpanel/align.hpp"
#include "gridpanel/csv.hpp"
#include "gridpanel/design.hpp"
#include "gridpanel/dgp.hpp"
#include "gridpanel/displacement.hpp"
#include "gridpanel/errors.hpp"
#include "gridpanel/fit.hpp"
#include "gridpanel/ingest.hpp"
#include "gridpanel/manifest.hpp"
#include "gridpanel/metrics.hpp"
#include "gridpanel/panel.hpp"
#include "gridpanel/records.hpp"
#include "gridpanel/scenarios.hpp"
#include "gridpanel/timeutil.hpp"

namespace gp = gridpanel;
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kExitCodeTable =
    "Exit codes:\n"
    "  0   success\n"
    "  64  usage          bad flags or arguments\n"
    "  65  schema         malformed input file\n"
    "  66  integrity      inconsistent inputs\n"
    "  67  data-quality   gap or coverage violation\n"
    "  68  domain         value outside its documented domain\n"
    "  69  estimation     singular or non-converging estimator\n"
    "  70  config         invalid configuration\n"
    "  71  missing-input  required file absent\n"
    "  74  io             file read or write failure\n"
    "  80  internal       unexpected condition\n"
    "Errors print one line on stderr: error class=<name> msg=<text>";

// Effective run configuration: JSON file first, then flag overrides.
struct RunConfig {
  std::string region = "CAISO";
  std::map<std::string, std::vector<std::string>> partners{{"CAISO", {"NW", "SW"}},
                                                           {"ERCOT", {"SWPP"}}};
  std::map<std::string, int> offsets{
      {"CAISO", -480}, {"ERCOT", -360}, {"NW", -480}, {"SW", -420}, {"SWPP", -360}};
  std::string span_start;  // empty: infer from the primary region's coverage
  std::string span_end;
  gp::GapPolicy gap;
  gp::AbsorbOptions absorb;
  double collinearity_tol = 1e-8;
  std::int64_t min_plant_hours = 100;
  gp::ZeroPolicy zero_policy = gp::ZeroPolicy::Drop;
  gp::SeMode se_mode = gp::SeMode::HC1;
  gp::EgridScenarioMode egrid_mode = gp::EgridScenarioMode::PerPlant;
  bool leave_one_out = false;
  int threads = 0;  // 0: all available cores
};

const char* egrid_mode_name(gp::EgridScenarioMode mode) {
  return mode == gp::EgridScenarioMode::PerPlant ? "per-plant" : "per-category";
}

gp::EgridScenarioMode parse_egrid_mode(const std::string& name) {
  if (name == "per-plant") return gp::EgridScenarioMode::PerPlant;
  if (name == "per-category") return gp::EgridScenarioMode::PerCategory;
  throw gp::ConfigError("unknown egrid scenario mode '" + name +
                        "' (expected per-plant or per-category)");
}

double json_number(const ordered_json& v, const std::string& key) {
  if (!v.is_number()) throw gp::ConfigError("config key " + key + " must be a number");
  return v.get<double>();
}

std::int64_t json_integer(const ordered_json& v, const std::string& key) {
  if (!v.is_number_integer()) throw gp::ConfigError("config key " + key + " must be an integer");
  return v.get<std::int64_t>();
}

std::string json_string(const ordered_json& v, const std::string& key) {
  if (!v.is_string()) throw gp::ConfigError("config key " + key + " must be a string");
  return v.get<std::string>();
}

RunConfig load_run_config(const fs::path& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw gp::MissingInputError("cannot open config file " + path.string());
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw gp::SchemaError("config file " + path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw gp::SchemaError("config file " + path.string() + ": not an object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "region") {
      cfg.region = json_string(value, key);
    } else if (key == "partners") {
      if (!value.is_object()) throw gp::ConfigError("config key partners must be an object");
      for (const auto& [region, list] : value.items()) {
        if (!list.is_array()) {
          throw gp::ConfigError("config key partners." + region + " must be an array");
        }
        std::vector<std::string> names;
        for (const auto& item : list) names.push_back(json_string(item, "partners." + region));
        cfg.partners[region] = std::move(names);
      }
    } else if (key == "standard_offset_minutes") {
      if (!value.is_object()) {
        throw gp::ConfigError("config key standard_offset_minutes must be an object");
      }
      for (const auto& [region, minutes] : value.items()) {
        cfg.offsets[region] = int(json_integer(minutes, "standard_offset_minutes." + region));
      }
    } else if (key == "span_start") {
      cfg.span_start = json_string(value, key);
    } else if (key == "span_end") {
      cfg.span_end = json_string(value, key);
    } else if (key == "gap_max_interp_hours") {
      cfg.gap.max_interp_hours = int(json_integer(value, key));
    } else if (key == "gap_max_missing_fraction") {
      cfg.gap.max_missing_fraction = json_number(value, key);
    } else if (key == "absorb_tol") {
      cfg.absorb.tol = json_number(value, key);
    } else if (key == "absorb_max_sweeps") {
      cfg.absorb.max_sweeps = int(json_integer(value, key));
    } else if (key == "collinearity_tol") {
      cfg.collinearity_tol = json_number(value, key);
    } else if (key == "min_plant_hours") {
      cfg.min_plant_hours = json_integer(value, key);
    } else if (key == "zero_policy") {
      cfg.zero_policy = gp::parse_zero_policy(json_string(value, key));
    } else if (key == "se_mode") {
      cfg.se_mode = gp::parse_se_mode(json_string(value, key));
    } else if (key == "egrid_scenario") {
      cfg.egrid_mode = parse_egrid_mode(json_string(value, key));
    } else if (key == "leave_one_out") {
      if (!value.is_boolean()) throw gp::ConfigError("config key leave_one_out must be a boolean");
      cfg.leave_one_out = value.get<bool>();
    } else if (key == "threads") {
      cfg.threads = int(json_integer(value, key));
    } else {
      throw gp::ConfigError("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

ordered_json config_document(const RunConfig& cfg) {
  ordered_json j;
  j["region"] = cfg.region;
  ordered_json partners = ordered_json::object();
  for (const auto& [region, list] : cfg.partners) partners[region] = list;
  j["partners"] = partners;
  ordered_json offsets = ordered_json::object();
  for (const auto& [region, minutes] : cfg.offsets) offsets[region] = minutes;
  j["standard_offset_minutes"] = offsets;
  j["span_start"] = cfg.span_start;
  j["span_end"] = cfg.span_end;
  j["gap_max_interp_hours"] = cfg.gap.max_interp_hours;
  j["gap_max_missing_fraction"] = cfg.gap.max_missing_fraction;
  j["absorb_tol"] = cfg.absorb.tol;
  j["absorb_max_sweeps"] = cfg.absorb.max_sweeps;
  j["collinearity_tol"] = cfg.collinearity_tol;
  j["min_plant_hours"] = cfg.min_plant_hours;
  j["zero_policy"] = gp::zero_policy_name(cfg.zero_policy);
  j["se_mode"] = gp::se_mode_name(cfg.se_mode);
  j["egrid_scenario"] = egrid_mode_name(cfg.egrid_mode);
  j["leave_one_out"] = cfg.leave_one_out;
  j["threads"] = cfg.threads;
  return j;
}

std::string config_digest(const RunConfig& cfg) {
  return gp::fnv1a64_hex(config_document(cfg).dump());
}

int offset_for(const RunConfig& cfg, const std::string& region) {
  auto it = cfg.offsets.find(region);
  if (it == cfg.offsets.end()) {
    throw gp::ConfigError("no standard offset configured for region " + region);
  }
  return it->second;
}

const std::vector<std::string>& partners_for(const RunConfig& cfg, const std::string& region) {
  auto it = cfg.partners.find(region);
  if (it == cfg.partners.end() || it->second.empty()) {
    throw gp::ConfigError("no partner set configured for region " + region);
  }
  return it->second;
}

int resolve_threads(const RunConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? int(hc) : 1;
}

// Work-stealing loop over [0, count). Tasks write to disjoint slots, so the
// result is identical for any thread count; the first exception wins.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = std::min<std::size_t>(std::size_t(std::max(threads, 1)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double lap() {
    auto t1 = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(t1 - t0).count();
    t0 = t1;
    return s;
  }
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::size_t end = comma == std::string::npos ? text.size() : comma;
    std::string item = text.substr(start, end - start);
    std::size_t a = item.find_first_not_of(" \t");
    std::size_t b = item.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

fs::path ensure_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw gp::IoError("cannot create directory " + p.string() + ": " + ec.message());
  return p;
}

std::string fmt(double v) { return gp::format_double(v); }

std::string fmt_opt(const std::optional<double>& v) { return v ? gp::format_double(*v) : ""; }

ordered_json json_or_null(double v) {
  return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

void write_json_file(const ordered_json& doc, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw gp::IoError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw gp::IoError("write failure on " + path.string());
}

gp::SpanDays resolve_span(const RunConfig& cfg,
                          const std::map<std::string, std::vector<gp::RegionHourRecord>>& by_region,
                          int offset_minutes) {
  if (!cfg.span_start.empty() || !cfg.span_end.empty()) {
    if (cfg.span_start.empty() || cfg.span_end.empty()) {
      throw gp::ConfigError("span_start and span_end must be set together");
    }
    auto start = gp::parse_date(cfg.span_start);
    auto end = gp::parse_date(cfg.span_end);
    if (!start) throw gp::ConfigError("span_start is not a date: " + cfg.span_start);
    if (!end) throw gp::ConfigError("span_end is not a date: " + cfg.span_end);
    gp::SpanDays span{gp::day_from_civil(*start), gp::day_from_civil(*end)};
    if (span.begin_day > span.end_day) throw gp::ConfigError("span_start is after span_end");
    return span;
  }
  auto it = by_region.find(cfg.region);
  if (it == by_region.end() || it->second.empty()) {
    throw gp::DataQualityError("no hourly rows for primary region " + cfg.region);
  }
  gp::EpochHour lo = it->second.front().hour;
  gp::EpochHour hi = lo;
  for (const auto& row : it->second) {
    lo = std::min(lo, row.hour);
    hi = std::max(hi, row.hour);
  }
  gp::EpochDay begin = gp::local_day(lo, offset_minutes);
  if (gp::day_start_hour(begin, offset_minutes) < lo) ++begin;
  gp::EpochDay end = gp::local_day(hi, offset_minutes);
  if (gp::day_start_hour(end, offset_minutes) + 23 > hi) --end;
  if (begin > end) {
    throw gp::DataQualityError("primary region series does not cover one full local day");
  }
  return gp::SpanDays{begin, end};
}

std::vector<std::string> region_plant_ids(const gp::AlignedDataset& ds) {
  std::vector<std::string> ids;
  auto region = gp::parse_region(ds.primary_region);
  for (const auto& plant : ds.plants) {
    auto it = ds.meta.find(plant.plant_id);
    if (it != ds.meta.end() && region && it->second.region == *region) {
      ids.push_back(plant.plant_id);
    }
  }
  return ids;
}

// Calendar years whose full Jan 1..Dec 31 range lies inside the span; annual
// metrics are only defined for these.
std::vector<int> covered_years(const gp::AlignedDataset& ds) {
  std::vector<int> full;
  for (int y = gp::year_of_day(ds.begin_day); y <= gp::year_of_day(ds.end_day); ++y) {
    if (gp::day_from_civil({y, 1, 1}) >= ds.begin_day &&
        gp::day_from_civil({y, 12, 31}) <= ds.end_day) {
      full.push_back(y);
    }
  }
  return full;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string dgp_config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

int cmd_synth(const SynthArgs& args) {
  Stopwatch sw;
  gp::DgpConfig config;
  if (!args.dgp_config.empty()) config = gp::parse_dgp_config(args.dgp_config);
  if (args.seed_set) config.seed = args.seed;
  gp::validate(config);
  fs::path out_dir = ensure_dir(args.out);
  auto output = gp::generate(config, out_dir);

  gp::RunManifest manifest;
  manifest.command = "synth";
  ordered_json cfg_doc;
  cfg_doc["seed"] = config.seed;
  cfg_doc["n_plants"] = config.n_plants;
  cfg_doc["days"] = config.days;
  cfg_doc["region"] = config.region;
  cfg_doc["partners"] = config.partners;
  cfg_doc["start_date"] = config.start_date;
  cfg_doc["offset_minutes"] = config.offset_minutes;
  cfg_doc["planted_generation"] = config.planted_generation;
  cfg_doc["planted_emissions"] = config.planted_emissions;
  cfg_doc["fe_scale"] = config.fe_scale;
  cfg_doc["noise_sigma"] = config.noise_sigma;
  cfg_doc["solar_amplitude"] = config.solar_amplitude;
  cfg_doc["wind_ar1"] = config.wind_ar1;
  cfg_doc["coefficient_spread"] = config.coefficient_spread;
  cfg_doc["hourly_model"] = config.hourly_model;
  manifest.config_digest = gp::fnv1a64_hex(cfg_doc.dump());
  if (!args.dgp_config.empty()) manifest.add_input(args.dgp_config);
  manifest.add_output(output.units_csv);
  manifest.add_output(output.plants_csv);
  manifest.add_output(output.region_csv);
  manifest.add_output(output.truth_json);
  manifest.counters["modeled_plants"] = config.n_plants;
  manifest.counters["background_plants"] = std::int64_t(output.background_plants.size());
  manifest.counters["days"] = config.days;
  manifest.stage_seconds["generate"] = sw.lap();
  gp::write_manifest(manifest, out_dir / "manifest_synth.json");

  std::cout << "synth: wrote " << output.units_csv.filename().string() << ", "
            << output.plants_csv.filename().string() << ", "
            << output.region_csv.filename().string() << ", "
            << output.truth_json.filename().string() << " in " << out_dir.string() << " (plants="
            << config.n_plants << " days=" << config.days << " seed=" << config.seed << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// ingest

struct IngestArgs {
  std::vector<std::string> units;
  std::string plants;
  std::vector<std::string> regions;
  std::string out;
};

int cmd_ingest(const RunConfig& cfg, const std::string& cfg_path, const IngestArgs& args) {
  Stopwatch sw;
  gp::RunManifest manifest;
  manifest.command = "ingest";
  manifest.config_digest = config_digest(cfg);
  if (!cfg_path.empty()) manifest.add_input(cfg_path);

  auto plant_result = gp::parse_plants(gp::read_csv_file(args.plants));
  manifest.add_input(args.plants);

  std::vector<gp::UnitHourRecord> units;
  std::vector<gp::RejectedRow> rejects = plant_result.rejects;
  std::int64_t unit_rows = 0;
  std::int64_t unit_rejects = 0;
  for (const auto& path : args.units) {
    auto table = gp::read_csv_file(path);
    unit_rows += std::int64_t(table.rows.size());
    auto result = gp::parse_unit_hours(table);
    units.insert(units.end(), result.records.begin(), result.records.end());
    unit_rejects += std::int64_t(result.rejects.size());
    rejects.insert(rejects.end(), result.rejects.begin(), result.rejects.end());
    manifest.add_input(path);
  }

  std::map<std::string, std::vector<gp::RegionHourRecord>> by_region;
  std::int64_t region_rejects = 0;
  for (const auto& path : args.regions) {
    auto result = gp::parse_region_hours(gp::read_csv_file(path));
    for (auto& [region, rows] : result.by_region) {
      auto& dst = by_region[region];
      dst.insert(dst.end(), rows.begin(), rows.end());
    }
    region_rejects += std::int64_t(result.rejects.size());
    rejects.insert(rejects.end(), result.rejects.begin(), result.rejects.end());
    manifest.add_input(path);
  }
  manifest.stage_seconds["parse"] = sw.lap();

  auto series = gp::aggregate_all_plants(units, plant_result.plants);
  int offset = offset_for(cfg, cfg.region);
  gp::SpanDays span = resolve_span(cfg, by_region, offset);
  auto dataset = gp::align_calendars(std::move(series), plant_result.plants, by_region, cfg.region,
                                     partners_for(cfg, cfg.region), span, offset, cfg.gap);
  manifest.stage_seconds["align"] = sw.lap();

  fs::path out_dir = ensure_dir(args.out);
  gp::save_dataset(dataset, out_dir);

  {
    std::vector<std::string> cols{"file", "line", "reason"};
    gp::CsvWriter w(out_dir / "rejects.csv", cols);
    for (const auto& r : rejects) {
      std::vector<std::string> row{r.file, std::to_string(r.line), r.reason};
      w.row(row);
    }
    w.close();
  }
  manifest.stage_seconds["save"] = sw.lap();

  for (const char* name :
       {"dataset.json", "aligned_region.csv", "aligned_plants.csv", "plants_meta.csv",
        "exclusions.csv"}) {
    manifest.add_output(out_dir / name);
  }
  manifest.add_output(out_dir / "rejects.csv");
  manifest.counters["unit_rows"] = unit_rows;
  manifest.counters["unit_records"] = std::int64_t(units.size());
  manifest.counters["unit_rejects"] = unit_rejects;
  manifest.counters["plant_rejects"] = std::int64_t(plant_result.rejects.size());
  manifest.counters["region_rejects"] = region_rejects;
  manifest.counters["plants"] = std::int64_t(dataset.plants.size());
  manifest.counters["span_days"] = dataset.n_days();
  manifest.counters["excluded_day_entries"] = std::int64_t(dataset.exclusions.size());
  gp::write_manifest(manifest, out_dir / "manifest_ingest.json");

  std::cout << "ingest: " << dataset.plants.size() << " plants, "
            << dataset.n_days() << " days (" << dataset.primary_region << " "
            << gp::format_date(gp::civil_from_day(dataset.begin_day)) << ".."
            << gp::format_date(gp::civil_from_day(dataset.end_day)) << "), "
            << dataset.exclusions.size() << " excluded region-days, " << rejects.size()
            << " rejected rows -> " << out_dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// metrics

struct MetricsArgs {
  std::string data;
  std::string out;
  std::vector<std::string> plants;
  std::vector<int> years;
};

struct PlantMetricsSlot {
  gp::EiCfCurve curve;
  std::map<gp::EpochDay, double> daily;
  std::vector<gp::HourRamp> intra;
  std::optional<double> ei_high_cf;
  std::optional<double> ei_low_cf;
};

int cmd_metrics(const RunConfig& cfg, const std::string& cfg_path, const MetricsArgs& args) {
  Stopwatch sw;
  auto ds = gp::load_dataset(args.data);

  std::vector<const gp::PlantHourSeries*> selected;
  if (args.plants.empty()) {
    for (const auto& plant : ds.plants) selected.push_back(&plant);
  } else {
    for (const auto& id : args.plants) {
      const auto* plant = ds.find_plant(id);
      if (!plant) throw gp::ConfigError("unknown plant id '" + id + "'");
      selected.push_back(plant);
    }
  }
  std::sort(selected.begin(), selected.end(),
            [](const auto* a, const auto* b) { return a->plant_id < b->plant_id; });

  gp::RunManifest manifest;
  manifest.command = "metrics";
  manifest.config_digest = config_digest(cfg);
  if (!cfg_path.empty()) manifest.add_input(cfg_path);
  for (const char* name :
       {"dataset.json", "aligned_region.csv", "aligned_plants.csv", "plants_meta.csv",
        "exclusions.csv"}) {
    manifest.add_input(fs::path(args.data) / name);
  }
  manifest.stage_seconds["load"] = sw.lap();

  std::vector<PlantMetricsSlot> slots(selected.size());
  parallel_for(selected.size(), resolve_threads(cfg), [&](std::size_t i) {
    const auto& series = *selected[i];
    auto& slot = slots[i];
    slot.curve = gp::ei_cf_curve(series);
    slot.daily = gp::daily_ramp(series, ds.offset_minutes);
    slot.intra = gp::intra_hour_ramp(series);
    try {
      slot.ei_high_cf = gp::conditional_mean_ei(series, {0.5, true});
    } catch (const gp::Error&) {
    }
    try {
      slot.ei_low_cf = gp::conditional_mean_ei(series, {0.5, false});
    } catch (const gp::Error&) {
    }
  });
  manifest.stage_seconds["plant_metrics"] = sw.lap();

  fs::path out_dir = ensure_dir(args.out);
  std::int64_t n_points = 0;
  {
    std::vector<std::string> cols{"plant_id", "capacity_factor", "ei_t_per_mwh"};
    gp::CsvWriter w(out_dir / "ei_cf_points.csv", cols);
    for (std::size_t i = 0; i < selected.size(); ++i) {
      for (const auto& p : slots[i].curve.points) {
        std::vector<std::string> row{selected[i]->plant_id, fmt(p.capacity_factor),
                                     fmt(p.emissions_intensity)};
        w.row(row);
        ++n_points;
      }
    }
    w.close();
  }
  {
    std::vector<std::string> cols{"plant_id", "bin_center", "mean_ei", "count"};
    gp::CsvWriter w(out_dir / "ei_cf_bins.csv", cols);
    for (std::size_t i = 0; i < selected.size(); ++i) {
      for (const auto& b : slots[i].curve.binned) {
        std::vector<std::string> row{selected[i]->plant_id, fmt(b.center), fmt(b.mean_ei),
                                     std::to_string(b.count)};
        w.row(row);
      }
    }
    w.close();
  }
  {
    std::vector<std::string> cols{"plant_id",           "p10_cf",
                                  "mean_ei_cf_above_half", "mean_ei_cf_below_half",
                                  "operating_hours",    "diagnostic"};
    gp::CsvWriter w(out_dir / "conditional_ei.csv", cols);
    for (std::size_t i = 0; i < selected.size(); ++i) {
      const auto& slot = slots[i];
      std::vector<std::string> row{selected[i]->plant_id,
                                   slot.curve.empty() ? "" : fmt(slot.curve.p10_cf),
                                   fmt_opt(slot.ei_high_cf), fmt_opt(slot.ei_low_cf),
                                   std::to_string(slot.curve.points.size()),
                                   slot.curve.diagnostic};
      w.row(row);
    }
    w.close();
  }
  {
    std::vector<std::string> cols{"plant_id", "date", "ramp_mw"};
    gp::CsvWriter w(out_dir / "ramps_daily.csv", cols);
    for (std::size_t i = 0; i < selected.size(); ++i) {
      for (const auto& [day, ramp] : slots[i].daily) {
        std::vector<std::string> row{selected[i]->plant_id,
                                     gp::format_date(gp::civil_from_day(day)), fmt(ramp)};
        w.row(row);
      }
    }
    w.close();
  }
  {
    std::vector<std::string> cols{"plant_id", "timestamp", "delta_mw"};
    gp::CsvWriter w(out_dir / "ramps_hourly.csv", cols);
    for (std::size_t i = 0; i < selected.size(); ++i) {
      for (const auto& r : slots[i].intra) {
        std::vector<std::string> row{selected[i]->plant_id,
                                     gp::format_timestamp(r.hour, ds.offset_minutes),
                                     fmt(r.delta_mw)};
        w.row(row);
      }
    }
    w.close();
  }
  {
    std::map<gp::Fuel, std::vector<const gp::PlantHourSeries*>> by_fuel;
    for (const auto* plant : selected) {
      auto it = ds.meta.find(plant->plant_id);
      if (it != ds.meta.end()) by_fuel[it->second.fuel].push_back(plant);
    }
    std::vector<std::string> cols{"fuel",        "hour",      "generation_mwh",
                                  "emissions_t", "ei_t_per_mwh", "count"};
    gp::CsvWriter w(out_dir / "profiles.csv", cols);
    for (const auto& [fuel, group] : by_fuel) {
      auto profile = gp::hourly_profile(group, ds.offset_minutes);
      for (int h = 0; h < 24; ++h) {
        std::vector<std::string> row{std::string(gp::fuel_name(fuel)), std::to_string(h),
                                     fmt(profile.generation_mwh[h]), fmt(profile.emissions_t[h]),
                                     fmt(profile.intensity[h]), std::to_string(profile.count[h])};
        w.row(row);
      }
    }
    w.close();
  }
  std::int64_t fleet_rows = 0;
  {
    // Annual rows need fully covered calendar years; explicit --year values
    // are passed through so coverage violations fail loudly.
    std::vector<int> years = args.years.empty() ? covered_years(ds) : args.years;
    auto region = gp::parse_region(ds.primary_region).value_or(gp::Region::OTHER);
    std::set<gp::Fuel> fuels;
    for (const auto& plant : ds.plants) {
      auto it = ds.meta.find(plant.plant_id);
      if (it != ds.meta.end() && region == it->second.region) fuels.insert(it->second.fuel);
    }
    std::vector<std::string> cols{"region",  "fuel",    "year",   "plant_count",
                                  "installed_gw", "generation_share_pct", "emissions_share_pct",
                                  "mean_ei", "sd_ei",   "mean_cf", "sd_cf"};
    gp::CsvWriter w(out_dir / "fleet_summary.csv", cols);
    for (int year : years) {
      for (gp::Fuel fuel : fuels) {
        auto fsrow = gp::fleet_summary(ds, region, fuel, year);
        std::vector<std::string> row{ds.primary_region,
                                     std::string(gp::fuel_name(fuel)),
                                     std::to_string(year),
                                     std::to_string(fsrow.plant_count),
                                     fmt(fsrow.installed_gw),
                                     fmt(fsrow.generation_share_pct),
                                     fmt(fsrow.emissions_share_pct),
                                     fmt(fsrow.mean_ei),
                                     fmt(fsrow.sd_ei),
                                     fmt(fsrow.mean_cf),
                                     fmt(fsrow.sd_cf)};
        w.row(row);
        ++fleet_rows;
      }
    }
    w.close();
  }
  manifest.stage_seconds["write"] = sw.lap();

  for (const char* name : {"ei_cf_points.csv", "ei_cf_bins.csv", "conditional_ei.csv",
                           "ramps_daily.csv", "ramps_hourly.csv", "profiles.csv",
                           "fleet_summary.csv"}) {
    manifest.add_output(out_dir / name);
  }
  manifest.counters["plants"] = std::int64_t(selected.size());
  manifest.counters["ei_cf_points"] = n_points;
  manifest.counters["fleet_rows"] = fleet_rows;
  gp::write_manifest(manifest, out_dir / "manifest_metrics.json");

  std::cout << "metrics: " << selected.size() << " plants, " << n_points
            << " EI/CF points, " << fleet_rows << " fleet rows -> " << out_dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// scenarios

struct ScenariosArgs {
  std::string data;
  std::string out;
  std::vector<int> years;
};

int cmd_scenarios(const RunConfig& cfg, const std::string& cfg_path, const ScenariosArgs& args) {
  Stopwatch sw;
  auto ds = gp::load_dataset(args.data);
  std::vector<int> years = args.years.empty() ? covered_years(ds) : args.years;
  if (years.empty()) {
    throw gp::ConfigError("span covers no complete calendar year; pass --year explicitly");
  }
  auto region = gp::parse_region(ds.primary_region).value_or(gp::Region::OTHER);

  gp::RunManifest manifest;
  manifest.command = "scenarios";
  manifest.config_digest = config_digest(cfg);
  if (!cfg_path.empty()) manifest.add_input(cfg_path);
  for (const char* name :
       {"dataset.json", "aligned_region.csv", "aligned_plants.csv", "plants_meta.csv",
        "exclusions.csv"}) {
    manifest.add_input(fs::path(args.data) / name);
  }
  manifest.stage_seconds["load"] = sw.lap();

  fs::path out_dir = ensure_dir(args.out);
  std::int64_t scenario_rows = 0;
  std::int64_t comparison_rows = 0;
  for (int year : years) {
    const std::string tag = ds.primary_region + "_" + std::to_string(year);
    std::map<gp::Fuel, std::optional<double>> category_ei;
    if (cfg.egrid_mode == gp::EgridScenarioMode::PerCategory) {
      for (gp::Fuel fuel : {gp::Fuel::NaturalGas, gp::Fuel::Coal, gp::Fuel::Other}) {
        category_ei[fuel] = gp::category_egrid_ei(ds, region, fuel, year);
      }
    }
    std::vector<gp::ScenarioResult> results(ds.plants.size());
    std::vector<std::optional<gp::CemsEgridRow>> comparisons(ds.plants.size());
    parallel_for(ds.plants.size(), resolve_threads(cfg), [&](std::size_t i) {
      const auto& series = ds.plants[i];
      const auto& meta = ds.meta.at(series.plant_id);
      std::optional<double> cat;
      if (cfg.egrid_mode == gp::EgridScenarioMode::PerCategory) cat = category_ei[meta.fuel];
      results[i] = gp::scenario_emissions(series, meta, ds, year, cfg.egrid_mode, cat);
      comparisons[i] = gp::compare_annual_cems_egrid(series, meta, ds, year);
    });

    {
      std::vector<std::string> cols{"plant_id",  "year",   "observed_t", "high_t",
                                    "low_t",     "egrid_t", "ei_p10",     "ei_p90",
                                    "generation_mwh", "observed_outside_bounds", "diagnostic"};
      gp::CsvWriter w(out_dir / ("scenarios_" + tag + ".csv"), cols);
      for (const auto& r : results) {
        std::vector<std::string> row{r.plant_id,
                                     std::to_string(r.year),
                                     fmt(r.observed_t),
                                     fmt(r.high_t),
                                     fmt(r.low_t),
                                     fmt_opt(r.egrid_t),
                                     fmt(r.ei_p10),
                                     fmt(r.ei_p90),
                                     fmt(r.generation_mwh),
                                     r.observed_outside_bounds ? "1" : "0",
                                     r.diagnostic};
        w.row(row);
        ++scenario_rows;
      }
      w.close();
    }
    {
      std::vector<std::string> cols{"plant_id", "year",       "cems_gen_mwh", "egrid_gen_mwh",
                                    "cems_co2_t", "egrid_co2_t", "cems_ei",      "egrid_ei",
                                    "gen_ratio",  "co2_ratio",   "ei_ratio"};
      gp::CsvWriter w(out_dir / ("cems_egrid_" + tag + ".csv"), cols);
      for (const auto& c : comparisons) {
        if (!c) continue;
        std::vector<std::string> row{c->plant_id,        std::to_string(c->year),
                                     fmt(c->cems_gen_mwh), fmt(c->egrid_gen_mwh),
                                     fmt(c->cems_co2_t),   fmt(c->egrid_co2_t),
                                     fmt(c->cems_ei),      fmt(c->egrid_ei),
                                     fmt(c->gen_ratio),    fmt(c->co2_ratio),
                                     fmt(c->ei_ratio)};
        w.row(row);
        ++comparison_rows;
      }
      w.close();
    }
    {
      auto rollup = gp::region_scenario_rollup(results, ds.primary_region, year);
      ordered_json j;
      j["region"] = rollup.region;
      j["year"] = rollup.year;
      j["plant_count"] = rollup.plant_count;
      j["observed_t"] = json_or_null(rollup.observed_t);
      j["high_t"] = json_or_null(rollup.high_t);
      j["low_t"] = json_or_null(rollup.low_t);
      j["egrid_t"] = rollup.egrid_t ? json_or_null(*rollup.egrid_t) : ordered_json(nullptr);
      j["egrid_plant_count"] = rollup.egrid_plant_count;
      j["high_deviation_pct"] = json_or_null(rollup.high_deviation_pct);
      j["low_deviation_pct"] = json_or_null(rollup.low_deviation_pct);
      j["egrid_deviation_pct"] = rollup.egrid_deviation_pct
                                     ? json_or_null(*rollup.egrid_deviation_pct)
                                     : ordered_json(nullptr);
      write_json_file(j, out_dir / ("scenario_rollup_" + tag + ".json"));
    }
    manifest.add_output(out_dir / ("scenarios_" + tag + ".csv"));
    manifest.add_output(out_dir / ("cems_egrid_" + tag + ".csv"));
    manifest.add_output(out_dir / ("scenario_rollup_" + tag + ".json"));
  }
  manifest.stage_seconds["scenarios"] = sw.lap();
  manifest.counters["years"] = std::int64_t(years.size());
  manifest.counters["scenario_rows"] = scenario_rows;
  manifest.counters["egrid_comparison_rows"] = comparison_rows;
  gp::write_manifest(manifest, out_dir / "manifest_scenarios.json");

  std::cout << "scenarios: " << years.size() << " year(s), " << scenario_rows
            << " plant rows, egrid mode " << egrid_mode_name(cfg.egrid_mode) << " -> "
            << out_dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// panel

struct PanelArgs {
  std::string data;
  std::string out;
  std::vector<std::string> plants;
  bool hourly = false;
};

int cmd_panel(const RunConfig& cfg, const std::string& cfg_path, const PanelArgs& args) {
  Stopwatch sw;
  auto ds = gp::load_dataset(args.data);

  gp::RunManifest manifest;
  manifest.command = "panel";
  manifest.config_digest = config_digest(cfg);
  if (!cfg_path.empty()) manifest.add_input(cfg_path);
  for (const char* name :
       {"dataset.json", "aligned_region.csv", "aligned_plants.csv", "plants_meta.csv",
        "exclusions.csv"}) {
    manifest.add_input(fs::path(args.data) / name);
  }
  manifest.stage_seconds["load"] = sw.lap();

  fs::path out_dir = ensure_dir(args.out);
  if (args.hourly) {
    std::vector<std::string> ids = args.plants.empty() ? region_plant_ids(ds) : args.plants;
    std::int64_t rows = 0;
    for (const auto& id : ids) {
      auto design = gp::build_hourly_design(ds, id);
      fs::path path = out_dir / ("design_" + id + "_hourly.csv");
      gp::write_hourly_design_csv(design, path, ds.offset_minutes);
      manifest.add_output(path);
      rows += std::int64_t(design.rows.size());
    }
    manifest.stage_seconds["build"] = sw.lap();
    manifest.counters["designs"] = std::int64_t(ids.size());
    manifest.counters["rows"] = rows;
    gp::write_manifest(manifest, out_dir / "manifest_panel.json");
    std::cout << "panel: " << ids.size() << " hourly design(s), " << rows << " rows -> "
              << out_dir.string() << "\n";
    return 0;
  }

  auto panel = gp::build_daily_panel(ds, args.plants, cfg.leave_one_out);
  fs::path path = out_dir / ("panel_" + panel.region + "_daily.csv");
  gp::write_panel_csv(panel, path);
  manifest.stage_seconds["build"] = sw.lap();
  manifest.add_output(path);
  manifest.counters["rows"] = std::int64_t(panel.rows.size());
  std::int64_t n_plants = 0;
  {
    std::string last;
    for (const auto& row : panel.rows) {
      if (row.plant_id != last) {
        ++n_plants;
        last = row.plant_id;
      }
    }
  }
  manifest.counters["plants"] = n_plants;
  gp::write_manifest(manifest, out_dir / "manifest_panel.json");
  std::cout << "panel: " << panel.rows.size() << " rows across " << n_plants << " plants -> "
            << path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// fit

struct FitArgs {
  std::string panel;
  std::vector<std::string> designs;
  std::string in_dir = ".";
  std::string out;
  std::string specs = "M1";
  std::string deps = "generation,emissions,intensity";
  std::string dist_regressor;
  int dist_bins = 20;
  std::vector<std::string> annotations;
};

std::map<std::string, double> parse_annotations(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    auto eq = item.find('=');
    double value = 0.0;
    if (eq == std::string::npos || eq == 0 ||
        !gp::parse_double(std::string_view(item).substr(eq + 1), value)) {
      throw gp::ConfigError("annotation '" + item + "' is not label=number");
    }
    out[item.substr(0, eq)] = value;
  }
  return out;
}

int cmd_fit(const RunConfig& cfg, const std::string& cfg_path, const FitArgs& args) {
  Stopwatch sw;
  if (!args.panel.empty() && !args.designs.empty()) {
    throw gp::ConfigError("pass either --panel or --design, not both");
  }
  std::vector<std::string> spec_ids =
      args.specs == "all" ? gp::all_spec_ids() : split_list(args.specs);
  if (spec_ids.empty()) throw gp::ConfigError("no specification ids given");
  std::vector<gp::Dependent> deps;
  for (const auto& name : split_list(args.deps)) deps.push_back(gp::parse_dependent(name));
  if (deps.empty()) throw gp::ConfigError("no dependents given");
  for (const auto& id : spec_ids) gp::make_design_spec(id, deps.front());  // validates ids

  gp::FitOptions opts;
  opts.se_mode = cfg.se_mode;
  opts.absorb = cfg.absorb;
  opts.collinearity_tol = cfg.collinearity_tol;
  opts.min_plant_hours = cfg.min_plant_hours;

  gp::RunManifest manifest;
  manifest.command = "fit";
  manifest.config_digest = config_digest(cfg);
  if (!cfg_path.empty()) manifest.add_input(cfg_path);
  fs::path out_dir = ensure_dir(args.out);

  std::vector<gp::FitResult> fits;
  std::int64_t removed_rows = 0;
  if (args.designs.empty()) {
    fs::path panel_path = args.panel.empty()
                              ? fs::path(args.in_dir) / ("panel_" + cfg.region + "_daily.csv")
                              : fs::path(args.panel);
    if (!fs::exists(panel_path)) {
      throw gp::MissingInputError("panel file not found: " + panel_path.string());
    }
    auto panel = gp::read_panel_csv(panel_path);
    manifest.add_input(panel_path);
    auto transformed = gp::log_transform(panel.rows, panel.region, cfg.zero_policy);
    removed_rows = transformed.removed_rows;
    manifest.stage_seconds["load"] = sw.lap();

    std::vector<std::pair<std::string, gp::Dependent>> tasks;
    for (const auto& id : spec_ids)
      for (auto dep : deps) tasks.emplace_back(id, dep);
    fits.resize(tasks.size());
    parallel_for(tasks.size(), resolve_threads(cfg), [&](std::size_t i) {
      auto spec = gp::make_design_spec(tasks[i].first, tasks[i].second);
      fits[i] = gp::fit_panel(transformed, spec, opts);
    });
    manifest.stage_seconds["fit"] = sw.lap();
    if (!args.dist_regressor.empty()) {
      throw gp::ConfigError("--dist applies to hourly per-plant fits (--design)");
    }
  } else {
    struct DesignTask {
      fs::path path;
      std::vector<gp::FitResult> fits;
      std::int64_t removed = 0;
    };
    std::vector<DesignTask> tasks;
    for (const auto& path : args.designs) tasks.push_back({fs::path(path), {}, 0});
    parallel_for(tasks.size(), resolve_threads(cfg), [&](std::size_t i) {
      auto design = gp::read_hourly_design_csv(tasks[i].path);
      auto transformed = gp::log_transform(design.rows, design.region, cfg.zero_policy);
      tasks[i].removed = transformed.removed_rows;
      for (const auto& id : spec_ids) {
        for (auto dep : deps) {
          auto spec = gp::hourly_variant(gp::make_design_spec(id, dep));
          tasks[i].fits.push_back(gp::fit_plant_hourly(transformed, spec, opts));
        }
      }
    });
    for (auto& task : tasks) {
      manifest.add_input(task.path);
      removed_rows += task.removed;
      for (auto& fit : task.fits) fits.push_back(std::move(fit));
    }
    manifest.stage_seconds["fit"] = sw.lap();
  }

  std::int64_t skipped = 0;
  for (const auto& fit : fits) {
    std::string stem = fit.plant_id.empty() ? fit.region : fit.plant_id;
    fs::path path = out_dir / ("fit_" + stem + "_" + fit.spec_id + "_" +
                               std::string(gp::dependent_name(fit.dependent)) + "_" +
                               gp::zero_policy_name(fit.policy) + "_" +
                               gp::se_mode_name(fit.se_mode) + ".json");
    gp::write_fit_json(fit, path);
    manifest.add_output(path);
    if (fit.skipped) {
      ++skipped;
      std::cout << "fit " << fit.spec_id << " " << gp::dependent_name(fit.dependent) << " "
                << stem << ": skipped (" << fit.diagnostic << ")\n";
    } else {
      std::cout << "fit " << fit.spec_id << " " << gp::dependent_name(fit.dependent) << " "
                << stem << ": n=" << fit.n_obs << " r2=" << fmt(fit.r_squared) << "\n";
    }
  }
  gp::write_fit_table_csv(fits, out_dir / "fits_table.csv");
  manifest.add_output(out_dir / "fits_table.csv");

  if (!args.dist_regressor.empty()) {
    if (spec_ids.size() != 1 || deps.size() != 1) {
      throw gp::ConfigError("--dist needs exactly one --spec and one --dep");
    }
    auto dist = gp::coefficient_distribution(fits, args.dist_regressor, args.dist_bins,
                                             parse_annotations(args.annotations));
    fs::path path = out_dir / ("coef_dist_" + spec_ids.front() + "_" +
                               std::string(gp::dependent_name(deps.front())) + "_" +
                               args.dist_regressor + ".csv");
    gp::write_coefficient_distribution_csv(dist, path);
    manifest.add_output(path);
    std::cout << "coefficient distribution " << args.dist_regressor << ": n=" << dist.n_fits
              << " mean=" << fmt(dist.mean) << " sd=" << fmt(dist.sd) << "\n";
  }
  manifest.stage_seconds["write"] = sw.lap();
  manifest.counters["fits"] = std::int64_t(fits.size());
  manifest.counters["skipped"] = skipped;
  manifest.counters["removed_rows"] = removed_rows;
  gp::write_manifest(manifest, out_dir / "manifest_fit.json");

  std::cout << "fit: " << fits.size() << " fit(s), " << skipped << " skipped, zero policy "
            << gp::zero_policy_name(cfg.zero_policy) << ", se " << gp::se_mode_name(cfg.se_mode)
            << " -> " << out_dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// displace

struct DisplaceArgs {
  std::string emissions;
  std::string intensity;
  std::vector<std::string> resources;
  std::string out = ".";
};

int cmd_displace(const RunConfig& cfg, const std::string& cfg_path, const DisplaceArgs& args) {
  Stopwatch sw;
  auto emissions_fit = gp::read_fit_json(args.emissions);
  auto intensity_fit = gp::read_fit_json(args.intensity);

  std::vector<gp::Resource> resources;
  if (args.resources.empty()) {
    for (gp::Resource r : {gp::Resource::Solar, gp::Resource::Wind}) {
      const char* name = gp::resource_name(r);
      if (emissions_fit.coefficient(name) && intensity_fit.coefficient(name)) {
        resources.push_back(r);
      }
    }
    if (resources.empty()) {
      throw gp::ConfigError("neither solar nor wind appears in both fits");
    }
  } else {
    for (const auto& name : args.resources) resources.push_back(gp::parse_resource(name));
  }

  std::vector<gp::DisplacementReport> reports;
  for (gp::Resource r : resources) {
    reports.push_back(gp::displacement_report(emissions_fit, intensity_fit, r));
  }

  fs::path out_dir = ensure_dir(args.out);
  fs::path path = out_dir / "displacement.json";
  gp::write_displacement_json(reports, path);

  gp::RunManifest manifest;
  manifest.command = "displace";
  manifest.config_digest = config_digest(cfg);
  if (!cfg_path.empty()) manifest.add_input(cfg_path);
  manifest.add_input(args.emissions);
  manifest.add_input(args.intensity);
  manifest.add_output(path);
  manifest.counters["reports"] = std::int64_t(reports.size());
  manifest.stage_seconds["displace"] = sw.lap();
  gp::write_manifest(manifest, out_dir / "manifest_displace.json");

  for (const auto& r : reports) {
    std::cout << "displace " << r.region << " " << r.spec_id << " " << gp::resource_name(r.resource)
              << ": fraction=" << fmt(r.fraction) << " se=" << fmt(r.fraction_se) << " ci=["
              << fmt(r.fraction_ci_low) << "," << fmt(r.fraction_ci_high)
              << "] implied_generation_response=" << fmt(r.implied_generation_response) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plant-level generation and emissions panel toolkit"};
  app.require_subcommand(1);
  app.footer(kExitCodeTable);
  app.set_version_flag("--version", "gridpanel 0.1.0");

  std::string config_path;
  std::string region_flag;
  int threads_flag = 0;
  std::string se_flag;
  std::string policy_flag;
  app.add_option("--config", config_path, "JSON run configuration; flags override its values");
  auto* region_opt = app.add_option("--region", region_flag, "Primary region id");
  auto* threads_opt = app.add_option("--threads", threads_flag, "Worker threads (default: all cores)");
  auto* se_opt = app.add_option("--se", se_flag, "Standard errors: hc1 or cluster");
  auto* policy_opt = app.add_option("--zero-policy", policy_flag, "Zero handling: drop or floor");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic input bundle with known coefficients");
  synth->add_option("--dgp-config", synth_args.dgp_config, "Generator config JSON");
  auto* seed_opt = synth->add_option("--seed", synth_args.seed, "Override the generator seed");
  synth->add_option("--out", synth_args.out, "Output directory")->required();

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest", "Parse, validate, and align the raw CSV inputs");
  ingest->add_option("--units", ingest_args.units, "Unit-hour CSV file(s)")->required();
  ingest->add_option("--plants", ingest_args.plants, "Plant metadata CSV")->required();
  ingest->add_option("--regions", ingest_args.regions, "Region-hour CSV file(s)")->required();
  ingest->add_option("--out", ingest_args.out, "Output directory")->required();

  MetricsArgs metrics_args;
  auto* metrics = app.add_subcommand("metrics", "Plant metrics: EI/CF curves, ramps, profiles, fleet summary");
  metrics->add_option("--data", metrics_args.data, "Aligned dataset directory")->required();
  metrics->add_option("--out", metrics_args.out, "Output directory")->required();
  metrics->add_option("--plant", metrics_args.plants, "Restrict to these plant ids");
  metrics->add_option("--year", metrics_args.years, "Fleet summary year(s)");

  ScenariosArgs scenarios_args;
  auto* scenarios = app.add_subcommand("scenarios", "Percentile emissions scenarios and eGRID comparison");
  scenarios->add_option("--data", scenarios_args.data, "Aligned dataset directory")->required();
  scenarios->add_option("--out", scenarios_args.out, "Output directory")->required();
  scenarios->add_option("--year", scenarios_args.years, "Scenario year(s)");
  std::string egrid_flag;
  auto* egrid_opt = scenarios->add_option("--egrid-mode", egrid_flag, "per-plant or per-category");

  PanelArgs panel_args;
  auto* panel = app.add_subcommand("panel", "Assemble the daily panel or hourly per-plant designs");
  panel->add_option("--data", panel_args.data, "Aligned dataset directory")->required();
  panel->add_option("--out", panel_args.out, "Output directory")->required();
  panel->add_option("--plant", panel_args.plants, "Restrict to these plant ids");
  panel->add_flag("--hourly", panel_args.hourly, "Write hourly designs instead of the daily panel");

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "Estimate fixed-effects regressions on a panel or designs");
  fit->add_option("--panel", fit_args.panel, "Daily panel CSV");
  fit->add_option("--design", fit_args.designs, "Hourly design CSV file(s)");
  fit->add_option("--in", fit_args.in_dir, "Directory holding panel_<region>_daily.csv (default .)");
  fit->add_option("--out", fit_args.out, "Output directory")->required();
  fit->add_option("--spec", fit_args.specs, "Specification ids, comma separated, or 'all' (default M1)");
  fit->add_option("--dep", fit_args.deps, "Dependents, comma separated (default all three)");
  fit->add_option("--dist", fit_args.dist_regressor, "Write the cross-fit coefficient distribution for this regressor");
  fit->add_option("--dist-bins", fit_args.dist_bins, "Histogram bins for --dist (default 20)");
  fit->add_option("--annotate", fit_args.annotations, "Reference line label=value for --dist");

  DisplaceArgs displace_args;
  auto* displace = app.add_subcommand("displace", "Displacement fractions from an emissions/intensity fit pair");
  displace->add_option("--emissions", displace_args.emissions, "Emissions fit JSON")->required();
  displace->add_option("--intensity", displace_args.intensity, "Intensity fit JSON")->required();
  displace->add_option("--resource", displace_args.resources, "solar and/or wind (default: both when present)");
  displace->add_option("--out", displace_args.out, "Output directory (default .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error class=usage msg=" << e.what() << "\n";
    return 64;
  }

  try {
    RunConfig cfg = load_run_config(config_path);
    if (region_opt->count() > 0) cfg.region = region_flag;
    if (threads_opt->count() > 0) cfg.threads = threads_flag;
    if (se_opt->count() > 0) cfg.se_mode = gp::parse_se_mode(se_flag);
    if (policy_opt->count() > 0) cfg.zero_policy = gp::parse_zero_policy(policy_flag);
    if (egrid_opt->count() > 0) cfg.egrid_mode = parse_egrid_mode(egrid_flag);
    synth_args.seed_set = seed_opt->count() > 0;

    if (synth->parsed()) return cmd_synth(synth_args);
    if (ingest->parsed()) return cmd_ingest(cfg, config_path, ingest_args);
    if (metrics->parsed()) return cmd_metrics(cfg, config_path, metrics_args);
    if (scenarios->parsed()) return cmd_scenarios(cfg, config_path, scenarios_args);
    if (panel->parsed()) return cmd_panel(cfg, config_path, panel_args);
    if (fit->parsed()) return cmd_fit(cfg, config_path, fit_args);
    if (displace->parsed()) return cmd_displace(cfg, config_path, displace_args);
    std::cerr << "error class=usage msg=no subcommand selected\n";
    return 64;
  } catch (const gp::Error& e) {
    std::cerr << "error class=" << gp::error_class_name(e.error_class()) << " msg=" << e.what()
              << "\n";
    return gp::exit_code(e.error_class());
  } catch (const std::exception& e) {
    std::cerr << "error class=internal msg=" << e.what() << "\n";
    return 80;
  }
}
