#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridpanel/absorb.hpp"
#include "gridpanel/design.hpp"
#include "gridpanel/ols.hpp"
#include "gridpanel/panel.hpp"

namespace gridpanel {

struct FitOptions {
  SeMode se_mode = SeMode::HC1;
  AbsorbOptions absorb;
  double collinearity_tol = 1e-8;
  std::int64_t min_plant_hours = 100;  // hourly fits below this are skipped
};

struct FitResult {
  std::string spec_id;
  Dependent dependent = Dependent::Generation;
  std::string region;
  std::string plant_id;  // empty for panel fits
  SeMode se_mode = SeMode::HC1;
  ZeroPolicy policy = ZeroPolicy::Drop;
  double imports_shift = 0.0;

  std::vector<std::string> regressor_names;  // kept regressors
  Eigen::VectorXd coefficients;
  Eigen::VectorXd std_errors;
  std::vector<std::string> dropped_collinear;
  double r_squared = 0.0;
  std::int64_t n_obs = 0;
  std::map<std::string, std::int64_t> fe_levels;  // absorbed group -> level count
  std::int64_t absorbed_df = 0;
  std::int64_t singletons_dropped = 0;
  int absorb_sweeps = 0;

  bool skipped = false;
  std::string diagnostic;

  std::optional<double> coefficient(std::string_view regressor) const;
  std::optional<double> std_error(std::string_view regressor) const;
};

// Rows are re-sorted by (entity, time) internally, so input row order never
// affects any reported number.
FitResult fit_panel(const TransformedPanel& panel, const DesignSpec& spec,
                    const FitOptions& opts = {});

// Single-plant hourly model: the spec must not request entity effects or the
// entity x month interaction.
FitResult fit_plant_hourly(const TransformedPanel& design, const DesignSpec& spec,
                           const FitOptions& opts = {});

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::int64_t count = 0;
};

struct CoefficientDistribution {
  std::string regressor;
  std::int64_t n_fits = 0;
  double mean = 0.0;
  double sd = 0.0;  // NaN for a single fit
  std::map<std::string, double> quantiles;  // p05, p25, p50, p75, p95
  std::vector<HistogramBin> bins;
  std::map<std::string, double> annotations;  // reference constants passed through
};

CoefficientDistribution coefficient_distribution(
    std::span<const FitResult> fits, const std::string& regressor, int n_bins = 20,
    std::map<std::string, double> annotations = {});

void write_fit_json(const FitResult& fit, const std::filesystem::path& path);
FitResult read_fit_json(const std::filesystem::path& path);

// Table-shaped CSV: one row per (spec, dependent, regressor) carrying the
// coefficient, its SE, significance stars from a two-sided normal test at
// 0.05 / 0.01 / 0.001, and the fit's r_squared and n_obs. Skipped fits are
// omitted.
void write_fit_table_csv(std::span<const FitResult> fits, const std::filesystem::path& path);

void write_coefficient_distribution_csv(const CoefficientDistribution& dist,
                                        const std::filesystem::path& path);

}  // namespace gridpanel
