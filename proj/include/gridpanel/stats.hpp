#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "gridpanel/errors.hpp"

namespace gridpanel {

// Quantile by linear interpolation between order statistics at rank (n-1)*q.
// `sorted` must be ascending. The interpolation is pinned to
// lo + frac*(hi - lo) so independent reimplementations can match it exactly.
template <typename Derived>
typename Derived::Scalar quantile_sorted(const Eigen::DenseBase<Derived>& sorted, double q) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = sorted.size();
  if (n == 0) throw DomainError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) {
    throw DomainError("quantile level " + std::to_string(q) + " outside [0,1]");
  }
  if (n == 1) return sorted[0];
  const double pos = q * double(n - 1);
  const Eigen::Index lo = Eigen::Index(std::floor(pos));
  if (lo >= n - 1) return sorted[n - 1];
  const double frac = pos - double(lo);
  return Scalar(sorted[lo] + Scalar(frac) * (sorted[lo + 1] - sorted[lo]));
}

template <typename Derived>
typename Derived::Scalar quantile(const Eigen::DenseBase<Derived>& values, double q) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> v = values.derived();
  std::sort(v.data(), v.data() + v.size());
  return quantile_sorted(v, q);
}

template <typename Derived>
double sample_mean(const Eigen::DenseBase<Derived>& values) {
  if (values.size() == 0) throw DomainError("mean of an empty sample");
  return values.derived().template cast<double>().mean();
}

// Unbiased (n-1) standard deviation; NaN for fewer than two values.
template <typename Derived>
double sample_sd(const Eigen::DenseBase<Derived>& values) {
  const Eigen::Index n = values.size();
  if (n < 2) return std::nan("");
  Eigen::VectorXd v = values.derived().template cast<double>();
  const double m = v.mean();
  return std::sqrt((v.array() - m).square().sum() / double(n - 1));
}

// Two-sided normal p-value for z = estimate/se.
inline double normal_p_two_sided(double z) {
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

inline const char* significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

}  // namespace gridpanel
