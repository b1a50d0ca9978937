#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gridpanel/align.hpp"
#include "gridpanel/records.hpp"

namespace gridpanel {

// Canonical covariate order; every design matrix and planted-coefficient map
// is keyed by these names.
enum Covariate : int {
  kGThermal = 0,
  kSolar,
  kWind,
  kWindRamp,
  kSolarExt,
  kWindExt,
  kDemandExt,
  kHydro,
  kNetImports,
  kResidualDemand,
  kNumCovariates,
};

const std::array<std::string, kNumCovariates>& covariate_names();
int covariate_index(std::string_view name);  // throws ConfigError on unknown name

// One observation of the panel (daily) or a plant design (hourly): dependent
// levels plus all candidate covariate levels.
struct PanelRow {
  std::string plant_id;
  std::int64_t time = 0;  // EpochDay for daily rows, EpochHour for hourly rows
  int month = 0;          // calendar month-of-year of the local day, 1..12
  int year = 0;           // calendar year of the local day
  double y_generation = 0.0;
  double y_emissions = 0.0;
  bool zero_generation = false;
  double demand = 0.0;
  std::array<double, kNumCovariates> covariates{};

  double y_ei() const {
    return y_generation > 0.0 ? y_emissions / y_generation : std::nan("");
  }
};

struct DailyPanel {
  std::string region;
  std::vector<PanelRow> rows;  // sorted by (plant_id, time)
};

struct HourlyDesign {
  std::string region;
  std::string plant_id;
  std::vector<PanelRow> rows;  // sorted by time
};

// Per-day covariates derived from region series; g_thermal is left at 0 for
// the caller to fill (the panel sums the ingested fleet, the synthetic
// generator plants its own series).
struct RegionDayCovariates {
  EpochDay day = 0;
  int month = 0;
  int year = 0;
  double demand = 0.0;
  std::array<double, kNumCovariates> covariates{};
};

// Shared covariate assembly: daily sums over the 24 local-standard hours,
// wind ramp as the within-day sum of |hourly wind changes|, partner sums in
// configured partner order. All series must be contiguous from first_hour.
std::vector<RegionDayCovariates> daily_covariates(const RegionHourSeries& primary,
                                                  const std::vector<const RegionHourSeries*>& partners,
                                                  EpochHour first_hour,
                                                  std::span<const EpochDay> days,
                                                  int offset_minutes);

// One row per (plant in filter) x (included day). The thermal-generation
// covariate sums every ingested plant of the primary region, whether or not
// the filter keeps it as a modeled row; leave_one_out subtracts each row's
// own plant from that sum.
DailyPanel build_daily_panel(const AlignedDataset& dataset,
                             const std::vector<std::string>& plant_filter = {},
                             bool leave_one_out = false);

// Hourly analogue for one plant; wind ramp is |W(t) - W(t-1)| and the first
// hour of the span has no ramp, so it carries no row.
HourlyDesign build_hourly_design(const AlignedDataset& dataset, const std::string& plant_id);

void write_panel_csv(const DailyPanel& panel, const std::filesystem::path& path);
DailyPanel read_panel_csv(const std::filesystem::path& path);
void write_hourly_design_csv(const HourlyDesign& design, const std::filesystem::path& path,
                             int offset_minutes);
HourlyDesign read_hourly_design_csv(const std::filesystem::path& path);

enum class ZeroPolicy { Drop, Floor };

const char* zero_policy_name(ZeroPolicy policy);
ZeroPolicy parse_zero_policy(std::string_view name);  // throws ConfigError

// Log-transformed estimation sample with fixed-effect group codes.
struct TransformedPanel {
  std::string region;
  ZeroPolicy policy = ZeroPolicy::Drop;
  std::vector<std::string> entity_levels;  // sorted plant ids
  std::vector<std::int32_t> entity;        // per row, index into entity_levels
  std::vector<int> month_levels;           // sorted distinct months
  std::vector<std::int32_t> month;
  std::vector<int> year_levels;  // sorted distinct years
  std::vector<std::int32_t> year;
  std::vector<std::int64_t> time;
  Eigen::MatrixXd covariates;  // n x kNumCovariates, natural logs
  Eigen::MatrixXd dependents;  // n x 3: ln y_generation, ln y_emissions, ln y_ei
  std::int64_t removed_rows = 0;
  double imports_shift = 0.0;  // s in ln(net_imports - s), s = row minimum - 1
  double wind_ramp_floor = 1.0;

  Eigen::Index n() const { return covariates.rows(); }
};

// Applies the documented zero policy. In both policies wind ramp is floored
// at `wind_ramp_floor` and net imports are shifted by (row minimum - 1)
// before logging; the shift is recorded.
TransformedPanel log_transform(std::span<const PanelRow> rows, const std::string& region,
                               ZeroPolicy policy, double wind_ramp_floor = 1.0);

}  // namespace gridpanel
