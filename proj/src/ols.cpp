#include "gridpanel/ols.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <map>

#include "gridpanel/errors.hpp"

namespace gridpanel {

const char* se_mode_name(SeMode mode) {
  return mode == SeMode::HC1 ? "hc1" : "cluster";
}

SeMode parse_se_mode(std::string_view name) {
  if (name == "hc1") return SeMode::HC1;
  if (name == "cluster") return SeMode::ClusterByEntity;
  throw ConfigError("unknown SE mode '" + std::string(name) + "' (expected hc1 or cluster)");
}

OlsResult ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const Eigen::VectorXd& original_norms, std::vector<std::string> names,
                  const OlsOptions& opts) {
  const Eigen::Index n = X.rows();
  if (y.size() != n) throw DomainError("ols_fit: X and y row counts differ");
  if (Eigen::Index(names.size()) != X.cols() || original_norms.size() != X.cols()) {
    throw DomainError("ols_fit: column names/norms do not match the design");
  }

  OlsResult result;
  result.n_obs = n;

  // Columns fully explained by the absorbed effects lose essentially all of
  // their norm in demeaning; drop them rather than failing the QR. <= keeps
  // the rule working for columns whose original norm was already zero.
  std::vector<Eigen::Index> kept_cols;
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    const double demeaned = X.col(c).norm();
    if (demeaned <= opts.collinearity_tol * original_norms[c]) {
      result.dropped_collinear.push_back(names[std::size_t(c)]);
    } else {
      kept_cols.push_back(c);
    }
  }
  const auto k = Eigen::Index(kept_cols.size());
  if (k == 0) throw EstimationError("every regressor was absorbed by the fixed effects");

  Eigen::MatrixXd Xk(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    Xk.col(j) = X.col(kept_cols[std::size_t(j)]);
    result.names.push_back(names[std::size_t(kept_cols[std::size_t(j)])]);
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xk);
  if (qr.rank() < k) {
    const auto& perm = qr.colsPermutation().indices();
    std::string deficient;
    for (Eigen::Index j = qr.rank(); j < k; ++j) {
      if (!deficient.empty()) deficient += ", ";
      deficient += result.names[std::size_t(perm[j])];
    }
    throw EstimationError("design is rank deficient; dependent columns: " + deficient);
  }

  result.beta = qr.solve(y);
  const Eigen::VectorXd resid = y - Xk * result.beta;

  result.df_model = k + opts.absorbed_df;
  const std::int64_t dof_resid = result.n_obs - result.df_model;
  if (dof_resid <= 0) {
    throw EstimationError("insufficient degrees of freedom: n=" + std::to_string(result.n_obs) +
                          ", parameters=" + std::to_string(result.df_model));
  }

  // (X'X)^-1 from the pivoted QR factor: X P = Q R, so
  // (X'X)^-1 = P R^-1 R^-T P'.
  const Eigen::MatrixXd R =
      qr.matrixQR().topLeftCorner(k, k).template triangularView<Eigen::Upper>();
  const Eigen::MatrixXd Rinv =
      R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd bread =
      qr.colsPermutation() * (Rinv * Rinv.transpose()) * qr.colsPermutation().transpose();

  Eigen::MatrixXd meat(k, k);
  double factor = 1.0;
  if (opts.se_mode == SeMode::HC1) {
    meat = Xk.transpose() * resid.array().square().matrix().asDiagonal() * Xk;
    factor = double(n) / double(dof_resid);
  } else {
    if (Eigen::Index(opts.clusters.size()) != n) {
      throw DomainError("cluster SEs requested without per-row cluster codes");
    }
    std::map<std::int32_t, Eigen::VectorXd> scores;
    for (Eigen::Index i = 0; i < n; ++i) {
      auto [it, inserted] =
          scores.try_emplace(opts.clusters[std::size_t(i)], Eigen::VectorXd::Zero(k));
      it->second += resid[i] * Xk.row(i).transpose();
    }
    const auto n_clusters = std::int64_t(scores.size());
    if (n_clusters < 2) throw EstimationError("clustered SEs need at least two clusters");
    meat.setZero();
    for (const auto& [code, s] : scores) meat += s * s.transpose();
    factor = (double(n_clusters) / double(n_clusters - 1)) *
             (double(n - 1) / double(dof_resid));
  }
  result.cov = factor * bread * meat * bread;
  result.se = result.cov.diagonal().cwiseMax(0.0).cwiseSqrt();

  const double ymean = y.mean();
  const double sst = (y.array() - ymean).square().sum();
  const double ssr = resid.squaredNorm();
  if (sst > 0.0) {
    result.r_squared = std::clamp(1.0 - ssr / sst, 0.0, 1.0);
  } else {
    result.r_squared = std::nan("");
  }
  return result;
}

}  // namespace gridpanel
