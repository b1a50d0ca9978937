#include "gridpanel/dgp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>

#include <Eigen/Core>
#include <json.hpp>

#include "gridpanel/csv.hpp"
#include "gridpanel/errors.hpp"
#include "gridpanel/panel.hpp"
#include "gridpanel/records.hpp"
#include "gridpanel/rng.hpp"
#include "gridpanel/timeutil.hpp"

namespace gridpanel {

std::map<std::string, double> DgpConfig::default_planted_generation() {
  return {{"thermal_generation", 2.80}, {"solar", -0.22},    {"wind", -0.20},
          {"wind_ramp", 0.12},          {"solar_ext", -0.06}, {"wind_ext", -0.04},
          {"demand_ext", 0.30},         {"hydro", -0.12},     {"net_imports", 0.08}};
}

std::map<std::string, double> DgpConfig::default_planted_emissions() {
  return {{"thermal_generation", 2.66}, {"solar", -0.21},    {"wind", -0.19},
          {"wind_ramp", 0.11},          {"solar_ext", -0.04}, {"wind_ext", -0.03},
          {"demand_ext", 0.26},         {"hydro", -0.09},     {"net_imports", 0.06}};
}

namespace {

constexpr double kRampFloor = 1.0;
constexpr double kPi = 3.14159265358979323846;

double planted_value(const std::map<std::string, double>& map, const std::string& name) {
  auto it = map.find(name);
  return it == map.end() ? 0.0 : it->second;
}

void check_planted_keys(const std::map<std::string, double>& map, const char* which) {
  for (const auto& [name, value] : map) {
    (void)value;
    covariate_index(name);
    if (name == "residual_demand") {
      throw ConfigError(std::string(which) +
                        " must not plant residual_demand; it is derived from demand, hydro, and "
                        "imports");
    }
  }
}

std::string plant_id_for(int index, int n_plants) {
  int width = 3;
  for (int v = n_plants; v >= 1000; v /= 10) ++width;
  std::string digits = std::to_string(index + 1);
  std::string id = "P";
  id.append(static_cast<std::size_t>(width) - digits.size(), '0');
  id += digits;
  return id;
}

}  // namespace

void validate(const DgpConfig& c) {
  if (c.n_plants < 1) throw ConfigError("dgp: n_plants must be >= 1");
  if (c.days < 28) throw ConfigError("dgp: days must be >= 28 so month effects vary");
  if (!(c.noise_sigma >= 0.0)) throw ConfigError("dgp: noise_sigma must be >= 0");
  if (!(c.fe_scale >= 0.0)) throw ConfigError("dgp: fe_scale must be >= 0");
  if (!(c.solar_amplitude >= 10.0)) {
    throw ConfigError(
        "dgp: solar_amplitude must be >= 10 so daylight values stay above the 1 MWh floor");
  }
  if (!(c.wind_ar1 >= 0.0 && c.wind_ar1 < 1.0)) {
    throw ConfigError("dgp: wind_ar1 must be in [0, 1)");
  }
  if (!(c.coefficient_spread >= 0.0 && c.coefficient_spread < 1.0)) {
    throw ConfigError("dgp: coefficient_spread must be in [0, 1)");
  }
  if (c.partners.empty()) throw ConfigError("dgp: at least one partner region is required");
  std::set<std::string> seen;
  for (const auto& p : c.partners) {
    if (p == c.region) throw ConfigError("dgp: partner list contains the primary region");
    if (!seen.insert(p).second) throw ConfigError("dgp: duplicate partner " + p);
  }
  if (!parse_date(c.start_date)) {
    throw ConfigError("dgp: start_date '" + c.start_date + "' is not a YYYY-MM-DD date");
  }
  if (c.offset_minutes % 60 != 0 || c.offset_minutes < -18 * 60 || c.offset_minutes > 18 * 60) {
    throw ConfigError("dgp: offset_minutes must be a whole number of hours within +-18:00");
  }
  check_planted_keys(c.planted_generation, "planted_generation");
  check_planted_keys(c.planted_emissions, "planted_emissions");
}

std::map<std::string, double> planted_intensity(const DgpConfig& c) {
  std::set<std::string> keys;
  for (const auto& [k, v] : c.planted_generation) {
    (void)v;
    keys.insert(k);
  }
  for (const auto& [k, v] : c.planted_emissions) {
    (void)v;
    keys.insert(k);
  }
  std::map<std::string, double> out;
  for (const auto& k : keys) {
    out[k] = planted_value(c.planted_emissions, k) - planted_value(c.planted_generation, k);
  }
  return out;
}

DgpConfig parse_dgp_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingInputError("cannot open dgp config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("dgp config " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw SchemaError("dgp config " + path.string() + " must be a JSON object");

  DgpConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "n_plants") {
        c.n_plants = value.get<int>();
      } else if (key == "days") {
        c.days = value.get<int>();
      } else if (key == "region") {
        c.region = value.get<std::string>();
      } else if (key == "partners") {
        c.partners = value.get<std::vector<std::string>>();
      } else if (key == "start_date") {
        c.start_date = value.get<std::string>();
      } else if (key == "offset_minutes") {
        c.offset_minutes = value.get<int>();
      } else if (key == "planted_generation") {
        c.planted_generation = value.get<std::map<std::string, double>>();
      } else if (key == "planted_emissions") {
        c.planted_emissions = value.get<std::map<std::string, double>>();
      } else if (key == "fe_scale") {
        c.fe_scale = value.get<double>();
      } else if (key == "noise_sigma") {
        c.noise_sigma = value.get<double>();
      } else if (key == "solar_amplitude") {
        c.solar_amplitude = value.get<double>();
      } else if (key == "wind_ar1") {
        c.wind_ar1 = value.get<double>();
      } else if (key == "coefficient_spread") {
        c.coefficient_spread = value.get<double>();
      } else if (key == "hourly_model") {
        c.hourly_model = value.get<bool>();
      } else {
        throw ConfigError("dgp config has unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("dgp config " + path.string() + ": " + e.what());
  }
  validate(c);
  return c;
}

DgpOutput generate(const DgpConfig& c, const std::filesystem::path& out_dir) {
  validate(c);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  const EpochDay d0 = day_from_civil(*parse_date(c.start_date));
  const int D = c.days;
  const Eigen::Index H = 24 * static_cast<Eigen::Index>(D);
  const EpochHour first_hour = day_start_hour(d0, c.offset_minutes);

  std::vector<EpochDay> days(static_cast<std::size_t>(D));
  std::iota(days.begin(), days.end(), d0);

  std::vector<int> years;
  std::vector<int> year_index_of_day(static_cast<std::size_t>(D));
  for (int t = 0; t < D; ++t) {
    const int y = year_of_day(d0 + t);
    if (years.empty() || years.back() != y) years.push_back(y);
    year_index_of_day[static_cast<std::size_t>(t)] = static_cast<int>(years.size()) - 1;
  }

  Rng rng(c.seed);

  // Draw order is part of the generator's contract: thermal targets, primary
  // series, partner series in configured order, fixed effects, then noise.
  const Eigen::Index n_periods = c.hourly_model ? H : D;
  std::vector<double> g_target(static_cast<std::size_t>(n_periods));
  for (double& g : g_target) g = std::exp(std::log(20000.0) + 0.3 * rng.normal());

  struct RegionDraw {
    std::string id;
    std::vector<double> solar, wind, hydro, demand, imports;
  };

  auto draw_region = [&](const std::string& id, double demand_base) {
    RegionDraw r;
    r.id = id;
    std::vector<double> amplitude(static_cast<std::size_t>(D));
    for (double& a : amplitude) a = c.solar_amplitude * (0.75 + 0.5 * rng.uniform());
    r.solar.assign(static_cast<std::size_t>(H), 0.0);
    for (Eigen::Index h = 0; h < H; ++h) {
      const Eigen::Index hl = h % 24;
      if (hl > 6 && hl < 20) {
        r.solar[static_cast<std::size_t>(h)] =
            amplitude[static_cast<std::size_t>(h / 24)] * std::sin(kPi * double(hl - 6) / 14.0);
      }
    }
    r.wind.resize(static_cast<std::size_t>(H));
    const double innovation = 0.5 * std::sqrt(1.0 - c.wind_ar1 * c.wind_ar1);
    double x = 0.0;
    for (Eigen::Index h = 0; h < H; ++h) {
      x = h == 0 ? 0.5 * rng.normal() : c.wind_ar1 * x + innovation * rng.normal();
      r.wind[static_cast<std::size_t>(h)] = std::exp(std::log(800.0) + x);
    }
    // Hydro and demand both need day-to-day level variation, not just hourly
    // noise: daily sums are what the panel regresses on, and month effects
    // absorb anything slower than that.
    std::vector<double> hydro_level(static_cast<std::size_t>(D));
    for (double& v : hydro_level) v = 250.0 + 300.0 * rng.uniform();
    r.hydro.resize(static_cast<std::size_t>(H));
    for (Eigen::Index h = 0; h < H; ++h) {
      r.hydro[static_cast<std::size_t>(h)] =
          hydro_level[static_cast<std::size_t>(h / 24)] + 100.0 * rng.uniform();
    }
    std::vector<double> demand_level(static_cast<std::size_t>(D));
    for (double& v : demand_level) v = std::exp(0.12 * rng.normal());
    r.demand.resize(static_cast<std::size_t>(H));
    for (Eigen::Index h = 0; h < H; ++h) {
      const double shape = 1.0 + 0.1 * std::sin(2.0 * kPi * double(h % 24 - 14) / 24.0);
      const double base = demand_base * demand_level[static_cast<std::size_t>(h / 24)];
      r.demand[static_cast<std::size_t>(h)] =
          std::max(base * shape + 300.0 * rng.normal(), 0.1 * base);
    }
    r.imports.resize(static_cast<std::size_t>(H));
    for (Eigen::Index h = 0; h < H; ++h) {
      r.imports[static_cast<std::size_t>(h)] =
          200.0 * std::sin(2.0 * kPi * double(h % 24) / 24.0) + 100.0 * rng.normal();
    }
    return r;
  };

  const RegionDraw primary = draw_region(c.region, 10000.0);
  std::vector<RegionDraw> partners;
  partners.reserve(c.partners.size());
  for (const std::string& pid : c.partners) partners.push_back(draw_region(pid, 8000.0));

  const int n = c.n_plants;
  auto draw_fe = [&](double scale, std::size_t count) {
    std::vector<double> v(count);
    for (double& x : v) x = scale * rng.normal();
    return v;
  };
  const std::vector<double> alpha_g = draw_fe(c.fe_scale, static_cast<std::size_t>(n));
  const std::vector<double> iota_g = draw_fe(0.5 * c.fe_scale, static_cast<std::size_t>(n) * 12);
  const std::vector<double> kappa_g = draw_fe(0.5 * c.fe_scale, years.size());
  const std::vector<double> alpha_e = draw_fe(c.fe_scale, static_cast<std::size_t>(n));
  const std::vector<double> iota_e = draw_fe(0.5 * c.fe_scale, static_cast<std::size_t>(n) * 12);
  const std::vector<double> kappa_e = draw_fe(0.5 * c.fe_scale, years.size());

  // Noise is drawn even at sigma 0 so the draw stream does not depend on it.
  Eigen::MatrixXd eps_g(n, n_periods), eps_e(n, n_periods);
  for (int p = 0; p < n; ++p) {
    for (Eigen::Index t = 0; t < n_periods; ++t) {
      eps_g(p, t) = rng.normal();
      eps_e(p, t) = rng.normal();
    }
  }

  // Region series in memory, shaped exactly as ingestion would produce them.
  auto to_series = [&](const RegionDraw& d) {
    RegionHourSeries s;
    s.region_id = d.id;
    s.hours.resize(static_cast<std::size_t>(H));
    for (Eigen::Index h = 0; h < H; ++h) s.hours[static_cast<std::size_t>(h)] = first_hour + h;
    auto vec = [&](const std::vector<double>& v) {
      return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()))
          .eval();
    };
    s.wind_mwh = vec(d.wind);
    s.solar_mwh = vec(d.solar);
    s.hydro_mwh = vec(d.hydro);
    s.demand_mwh = vec(d.demand);
    s.net_imports_mwh = vec(d.imports);
    return s;
  };
  const RegionHourSeries primary_series = to_series(primary);
  std::vector<RegionHourSeries> partner_series;
  partner_series.reserve(partners.size());
  for (const RegionDraw& p : partners) partner_series.push_back(to_series(p));
  std::vector<const RegionHourSeries*> partner_ptrs;
  for (const RegionHourSeries& s : partner_series) partner_ptrs.push_back(&s);

  std::vector<RegionDayCovariates> day_cov =
      daily_covariates(primary_series, partner_ptrs, first_hour, days, c.offset_minutes);

  // Log covariates per period, transformed the way the estimation sample is:
  // imports shifted so their minimum maps to 1, everything else floored at 1
  // (a floor that never binds at these scales except for the wind ramp).
  const int K = kResidualDemand;
  Eigen::MatrixXd lnx(n_periods, K);
  double imports_shift = 0.0;
  if (!c.hourly_model) {
    for (int t = 0; t < D; ++t) {
      day_cov[static_cast<std::size_t>(t)].covariates[kGThermal] =
          g_target[static_cast<std::size_t>(t)];
    }
    double min_imports = std::numeric_limits<double>::infinity();
    for (int t = 0; t < D; ++t) {
      min_imports = std::min(min_imports, day_cov[static_cast<std::size_t>(t)].covariates[kNetImports]);
    }
    imports_shift = min_imports - 1.0;
    for (int t = 0; t < D; ++t) {
      for (int j = 0; j < K; ++j) {
        double v = day_cov[static_cast<std::size_t>(t)].covariates[j];
        v = j == kNetImports ? v - imports_shift : std::max(v, kRampFloor);
        lnx(t, j) = std::log(v);
      }
    }
  } else {
    double min_imports = std::numeric_limits<double>::infinity();
    for (Eigen::Index h = 1; h < H; ++h) {
      min_imports = std::min(min_imports, primary.imports[static_cast<std::size_t>(h)]);
    }
    imports_shift = min_imports - 1.0;
    lnx.row(0).setZero();  // hour 0 has no ramp predecessor and never enters a design
    for (Eigen::Index h = 1; h < H; ++h) {
      const auto hs = static_cast<std::size_t>(h);
      std::array<double, kNumCovariates> raw{};
      raw[kGThermal] = g_target[hs];
      raw[kSolar] = primary.solar[hs];
      raw[kWind] = primary.wind[hs];
      raw[kWindRamp] = std::abs(primary.wind[hs] - primary.wind[hs - 1]);
      double sx = 0.0, wx = 0.0, dx = 0.0;
      for (const RegionDraw& p : partners) {
        sx += p.solar[hs];
        wx += p.wind[hs];
        dx += p.demand[hs];
      }
      raw[kSolarExt] = sx;
      raw[kWindExt] = wx;
      raw[kDemandExt] = dx;
      raw[kHydro] = primary.hydro[hs];
      raw[kNetImports] = primary.imports[hs];
      for (int j = 0; j < K; ++j) {
        const double v = j == kNetImports ? raw[static_cast<std::size_t>(j)] - imports_shift
                                          : std::max(raw[static_cast<std::size_t>(j)], kRampFloor);
        lnx(h, j) = std::log(v);
      }
    }
  }

  // Per-plant elasticities, symmetric around the map values.
  const auto& names = covariate_names();
  std::vector<Eigen::VectorXd> beta_g(static_cast<std::size_t>(n)),
      beta_e(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) {
    const double t_p = n == 1 ? 0.0 : (2.0 * p - (n - 1)) / double(n - 1);
    Eigen::VectorXd bg(K), be(K);
    for (int j = 0; j < K; ++j) {
      const std::string& name = names[static_cast<std::size_t>(j)];
      bg[j] = planted_value(c.planted_generation, name) * (1.0 + c.coefficient_spread * t_p);
      be[j] = planted_value(c.planted_emissions, name) * (1.0 + c.coefficient_spread * t_p);
    }
    beta_g[static_cast<std::size_t>(p)] = std::move(bg);
    beta_e[static_cast<std::size_t>(p)] = std::move(be);
  }

  Eigen::MatrixXd u_g(n, n_periods), u_e(n, n_periods);
  for (int p = 0; p < n; ++p) {
    const auto ps = static_cast<std::size_t>(p);
    for (Eigen::Index t = 0; t < n_periods; ++t) {
      const auto day_index = static_cast<std::size_t>(c.hourly_model ? t / 24 : t);
      const int month_idx = day_cov[day_index].month - 1;
      const int year_idx = year_index_of_day[day_index];
      u_g(p, t) = std::exp(alpha_g[ps] + iota_g[ps * 12 + static_cast<std::size_t>(month_idx)] +
                           kappa_g[static_cast<std::size_t>(year_idx)] +
                           c.noise_sigma * eps_g(p, t) + lnx.row(t).dot(beta_g[ps]));
      u_e(p, t) = std::exp(alpha_e[ps] + iota_e[ps * 12 + static_cast<std::size_t>(month_idx)] +
                           kappa_e[static_cast<std::size_t>(year_idx)] +
                           c.noise_sigma * eps_e(p, t) + lnx.row(t).dot(beta_e[ps]));
    }
  }
  if (c.hourly_model) {
    u_g.col(0) = u_g.col(1);
    u_e.col(0) = u_e.col(1);
  }

  // Modeled plants are scaled to at most half of the thermal target; two
  // background plants carry the remainder so the fleet sums to the target.
  double gamma = std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; t < n_periods; ++t) {
    gamma = std::min(gamma, 0.5 * g_target[static_cast<std::size_t>(t)] / u_g.col(t).sum());
  }
  const Eigen::MatrixXd y = gamma * u_g;
  const Eigen::MatrixXd em = (0.5 * y.sum() / u_e.sum()) * u_e;

  std::vector<double> bg1(static_cast<std::size_t>(n_periods)),
      bg2(static_cast<std::size_t>(n_periods));
  for (Eigen::Index t = 0; t < n_periods; ++t) {
    const double b = g_target[static_cast<std::size_t>(t)] - y.col(t).sum();
    bg1[static_cast<std::size_t>(t)] = 0.625 * b;
    bg2[static_cast<std::size_t>(t)] = b - bg1[static_cast<std::size_t>(t)];
  }

  DgpOutput out;
  out.units_csv = out_dir / "units.csv";
  out.plants_csv = out_dir / "plants.csv";
  out.region_csv = out_dir / "region.csv";
  out.truth_json = out_dir / "dgp_truth.json";
  for (int p = 0; p < n; ++p) out.modeled_plants.push_back(plant_id_for(p, n));
  out.background_plants = {"BG1", "BG2"};

  auto gen_at = [&](int p, Eigen::Index h) {
    return c.hourly_model ? y(p, h) : y(p, h / 24) / 24.0;
  };
  auto em_at = [&](int p, Eigen::Index h) {
    return c.hourly_model ? em(p, h) : em(p, h / 24) / 24.0;
  };
  auto bg_at = [&](int which, Eigen::Index h) {
    const std::vector<double>& v = which == 0 ? bg1 : bg2;
    return c.hourly_model ? v[static_cast<std::size_t>(h)]
                          : v[static_cast<std::size_t>(h / 24)] / 24.0;
  };

  {
    const std::vector<std::string> cols = {"plant_id",   "unit_id",          "timestamp",
                                           "gross_load_mwh", "co2_tonnes",   "heat_input_mmbtu",
                                           "operating"};
    CsvWriter w(out.units_csv, cols);
    std::vector<std::string> row(cols.size());
    auto write_plant = [&](const std::string& id, auto gen_fn, auto em_fn) {
      for (Eigen::Index h = 0; h < H; ++h) {
        const double g = gen_fn(h);
        row[0] = id;
        row[1] = "U1";
        row[2] = format_timestamp(first_hour + h, c.offset_minutes);
        row[3] = format_double(g);
        row[4] = format_double(em_fn(h));
        row[5] = format_double(7.0 * g);
        row[6] = "1";
        w.row(row);
      }
    };
    for (int p = 0; p < n; ++p) {
      write_plant(
          out.modeled_plants[static_cast<std::size_t>(p)],
          [&](Eigen::Index h) { return gen_at(p, h); },
          [&](Eigen::Index h) { return em_at(p, h); });
    }
    write_plant(
        "BG1", [&](Eigen::Index h) { return bg_at(0, h); },
        [&](Eigen::Index h) { return 0.6 * bg_at(0, h); });
    write_plant(
        "BG2", [&](Eigen::Index h) { return bg_at(1, h); },
        [&](Eigen::Index h) { return 0.6 * bg_at(1, h); });
    w.close();
  }

  {
    const std::vector<std::string> cols = {"plant_id", "region",        "fuel",
                                           "nameplate_mw", "year",      "egrid_gen_mwh",
                                           "egrid_co2_t"};
    CsvWriter w(out.plants_csv, cols);
    auto emit = [&](const std::string& id, double peak, const char* fuel) {
      const std::vector<std::string> row = {id, c.region, fuel, format_double(std::ceil(peak * 1.3)),
                                            "",  "",       ""};
      w.row(row);
    };
    for (int p = 0; p < n; ++p) {
      double peak = 0.0;
      for (Eigen::Index h = 0; h < H; ++h) peak = std::max(peak, gen_at(p, h));
      emit(out.modeled_plants[static_cast<std::size_t>(p)], peak, p % 2 == 0 ? "gas" : "coal");
    }
    for (int b = 0; b < 2; ++b) {
      double peak = 0.0;
      for (Eigen::Index h = 0; h < H; ++h) peak = std::max(peak, bg_at(b, h));
      emit(out.background_plants[static_cast<std::size_t>(b)], peak, "gas");
    }
    w.close();
  }

  {
    const std::vector<std::string> cols = {"region_id", "timestamp",  "wind_mwh", "solar_mwh",
                                           "hydro_mwh", "demand_mwh", "net_imports_mwh"};
    CsvWriter w(out.region_csv, cols);
    std::vector<std::string> row(cols.size());
    auto write_region = [&](const RegionDraw& r) {
      for (Eigen::Index h = 0; h < H; ++h) {
        const auto hs = static_cast<std::size_t>(h);
        row[0] = r.id;
        row[1] = format_timestamp(first_hour + h, c.offset_minutes);
        row[2] = format_double(r.wind[hs]);
        row[3] = format_double(r.solar[hs]);
        row[4] = format_double(r.hydro[hs]);
        row[5] = format_double(r.demand[hs]);
        row[6] = format_double(r.imports[hs]);
        w.row(row);
      }
    };
    write_region(primary);
    for (const RegionDraw& p : partners) write_region(p);
    w.close();
  }

  {
    nlohmann::ordered_json truth;
    truth["seed"] = c.seed;
    truth["region"] = c.region;
    truth["partners"] = c.partners;
    truth["start_date"] = c.start_date;
    truth["days"] = c.days;
    truth["n_plants"] = c.n_plants;
    truth["offset_minutes"] = c.offset_minutes;
    truth["hourly_model"] = c.hourly_model;
    truth["noise_sigma"] = c.noise_sigma;
    truth["fe_scale"] = c.fe_scale;
    truth["solar_amplitude"] = c.solar_amplitude;
    truth["wind_ar1"] = c.wind_ar1;
    truth["coefficient_spread"] = c.coefficient_spread;
    truth["planted_generation"] = c.planted_generation;
    truth["planted_emissions"] = c.planted_emissions;
    truth["planted_intensity"] = planted_intensity(c);
    truth["modeled_plants"] = out.modeled_plants;
    truth["background_plants"] = out.background_plants;
    truth["imports_shift"] = imports_shift;
    truth["wind_ramp_floor"] = kRampFloor;
    std::vector<double> ramp_daily(static_cast<std::size_t>(D));
    for (int t = 0; t < D; ++t) {
      ramp_daily[static_cast<std::size_t>(t)] =
          day_cov[static_cast<std::size_t>(t)].covariates[kWindRamp];
    }
    truth["wind_ramp_daily"] = ramp_daily;
    if (c.coefficient_spread != 0.0) {
      nlohmann::ordered_json per_plant = nlohmann::ordered_json::object();
      for (int p = 0; p < n; ++p) {
        nlohmann::ordered_json maps;
        nlohmann::ordered_json gen_map = nlohmann::ordered_json::object();
        nlohmann::ordered_json em_map = nlohmann::ordered_json::object();
        for (int j = 0; j < K; ++j) {
          gen_map[names[static_cast<std::size_t>(j)]] = beta_g[static_cast<std::size_t>(p)][j];
          em_map[names[static_cast<std::size_t>(j)]] = beta_e[static_cast<std::size_t>(p)][j];
        }
        maps["generation"] = std::move(gen_map);
        maps["emissions"] = std::move(em_map);
        per_plant[out.modeled_plants[static_cast<std::size_t>(p)]] = std::move(maps);
      }
      truth["plant_coefficients"] = std::move(per_plant);
    }

    std::ofstream f(out.truth_json);
    if (!f) throw IoError("cannot open " + out.truth_json.string() + " for writing");
    f << truth.dump(2) << '\n';
    if (!f.good()) throw IoError("failed writing " + out.truth_json.string());
  }

  return out;
}

}  // namespace gridpanel
