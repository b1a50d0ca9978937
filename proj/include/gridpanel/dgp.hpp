#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace gridpanel {

// Synthetic input bundle with a planted log-log relation between daily (or
// hourly) plant outcomes and the region covariates, so estimator tests can
// compare recovered coefficients against exact truth.
struct DgpConfig {
  std::uint64_t seed = 42;
  int n_plants = 20;  // modeled plants; two background plants are added
  int days = 90;      // >= 28 so month effects have more than one level
  std::string region = "CAISO";
  std::vector<std::string> partners = {"NW", "SW"};
  std::string start_date = "2022-01-01";  // first local day of the span
  int offset_minutes = -480;              // standard offset for day bucketing

  // True elasticities keyed by covariate name. Generation and emissions use
  // different values so the implied intensity relation (their difference) is
  // nonzero for every regressor.
  std::map<std::string, double> planted_generation = default_planted_generation();
  std::map<std::string, double> planted_emissions = default_planted_emissions();

  double fe_scale = 0.3;            // spread of plant / month / year effects
  double noise_sigma = 0.0;         // log-error SD, >= 0
  double solar_amplitude = 2000.0;  // peak hourly solar scale, >= 10
  double wind_ar1 = 0.85;           // hourly log-wind persistence, in [0, 1)

  // Plant p gets coefficient beta * (1 + spread * t_p) with t_p spaced
  // symmetrically in [-1, 1], so the fleet mean stays at the map value.
  double coefficient_spread = 0.0;

  // false: the planted relation holds for daily aggregates (panel model);
  // true: it holds per hour with a ramp predecessor (single-plant model).
  bool hourly_model = false;

  static std::map<std::string, double> default_planted_generation();
  static std::map<std::string, double> default_planted_emissions();
};

void validate(const DgpConfig& config);  // throws ConfigError

// JSON file with the DgpConfig field names as keys; absent keys keep their
// defaults, unknown keys are rejected.
DgpConfig parse_dgp_config(const std::filesystem::path& path);

// Emissions-minus-generation coefficient per covariate: the relation the
// intensity dependent obeys.
std::map<std::string, double> planted_intensity(const DgpConfig& config);

struct DgpOutput {
  std::filesystem::path units_csv;
  std::filesystem::path plants_csv;
  std::filesystem::path region_csv;
  std::filesystem::path truth_json;
  std::vector<std::string> modeled_plants;
  std::vector<std::string> background_plants;
};

// Writes units.csv, plants.csv, region.csv (ingest schemas) and
// dgp_truth.json into out_dir. Deterministic: a fixed config yields
// byte-identical files (mt19937_64 with explicit bit-to-double mappings).
DgpOutput generate(const DgpConfig& config, const std::filesystem::path& out_dir);

}  // namespace gridpanel
