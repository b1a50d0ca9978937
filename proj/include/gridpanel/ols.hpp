#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gridpanel {

enum class SeMode { HC1, ClusterByEntity };

const char* se_mode_name(SeMode mode);
SeMode parse_se_mode(std::string_view name);  // throws ConfigError

struct OlsOptions {
  SeMode se_mode = SeMode::HC1;
  std::span<const std::int32_t> clusters;  // entity codes; required for cluster mode
  std::int64_t absorbed_df = 0;            // parameters already absorbed by FE demeaning
  double collinearity_tol = 1e-8;
};

struct OlsResult {
  std::vector<std::string> names;  // kept regressors, design order
  Eigen::VectorXd beta;
  Eigen::MatrixXd cov;
  Eigen::VectorXd se;
  double r_squared = 0.0;  // centered R^2 of the (demeaned) regression
  std::int64_t n_obs = 0;
  std::int64_t df_model = 0;  // kept slopes + absorbed_df
  std::vector<std::string> dropped_collinear;
};

// Least squares on an already-demeaned design via column-pivoted QR.
// Columns whose demeaned norm is below collinearity_tol x original_norms are
// dropped up front and reported; genuine rank deficiency past that throws
// EstimationError naming the offending columns. Robust covariance: HC1
// sandwich with n/(n-k) scaling, or entity-clustered with
// G/(G-1) x (n-1)/(n-k).
OlsResult ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const Eigen::VectorXd& original_norms, std::vector<std::string> names,
                  const OlsOptions& opts = {});

}  // namespace gridpanel
