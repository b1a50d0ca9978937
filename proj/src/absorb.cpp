#include "gridpanel/absorb.hpp"

#include <algorithm>
#include <numeric>

#include "gridpanel/errors.hpp"

namespace gridpanel {

FeGroup make_group(std::string name, std::vector<std::int32_t> codes) {
  FeGroup g;
  g.name = std::move(name);
  g.codes = std::move(codes);
  std::int32_t max_code = -1;
  for (std::int32_t c : g.codes) {
    if (c < 0) throw DomainError("fixed-effect group " + g.name + " has a negative level code");
    max_code = std::max(max_code, c);
  }
  g.n_levels = max_code + 1;
  return g;
}

namespace {

void recode_compact(FeGroup& g) {
  std::vector<std::int32_t> remap(std::size_t(g.n_levels), -1);
  std::int32_t next = 0;
  for (std::int32_t& c : g.codes) {
    if (remap[std::size_t(c)] < 0) remap[std::size_t(c)] = next++;
    c = remap[std::size_t(c)];
  }
  g.n_levels = next;
}

}  // namespace

std::vector<Eigen::Index> drop_singletons(std::vector<FeGroup>& groups) {
  if (groups.empty()) return {};
  const std::size_t n = groups.front().codes.size();
  for (const auto& g : groups) {
    if (g.codes.size() != n) {
      throw DomainError("fixed-effect groups disagree on row count");
    }
  }

  std::vector<char> keep(n, 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& g : groups) {
      std::vector<std::int32_t> count(std::size_t(g.n_levels), 0);
      for (std::size_t i = 0; i < n; ++i) {
        if (keep[i]) count[std::size_t(g.codes[i])] += 1;
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (keep[i] && count[std::size_t(g.codes[i])] == 1) {
          keep[i] = 0;
          changed = true;
        }
      }
    }
  }

  std::vector<Eigen::Index> kept;
  kept.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) kept.push_back(Eigen::Index(i));
  }
  for (auto& g : groups) {
    std::vector<std::int32_t> codes;
    codes.reserve(kept.size());
    for (Eigen::Index i : kept) codes.push_back(g.codes[std::size_t(i)]);
    g.codes = std::move(codes);
    recode_compact(g);
  }
  return kept;
}

namespace {

void demean_group(Eigen::Ref<Eigen::MatrixXd> data, const FeGroup& g) {
  const Eigen::Index n = data.rows();
  const Eigen::Index c = data.cols();
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(g.n_levels, c);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(g.n_levels);
  for (Eigen::Index i = 0; i < n; ++i) {
    sums.row(g.codes[std::size_t(i)]) += data.row(i);
    counts[g.codes[std::size_t(i)]] += 1.0;
  }
  for (Eigen::Index l = 0; l < g.n_levels; ++l) {
    if (counts[l] > 0.0) sums.row(l) /= counts[l];
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    data.row(i) -= sums.row(g.codes[std::size_t(i)]);
  }
}

}  // namespace

AbsorbStats absorb_fixed_effects(Eigen::Ref<Eigen::MatrixXd> data,
                                 const std::vector<FeGroup>& groups, const AbsorbOptions& opts) {
  AbsorbStats stats;
  if (groups.empty() || data.rows() == 0) return stats;
  for (const auto& g : groups) {
    if (Eigen::Index(g.codes.size()) != data.rows()) {
      throw DomainError("fixed-effect group " + g.name + " does not match the data row count");
    }
    if (g.n_levels < 1) throw DomainError("fixed-effect group " + g.name + " has no levels");
  }
  if (!data.allFinite()) throw DomainError("design contains non-finite values before absorption");

  if (groups.size() == 1) {
    demean_group(data, groups.front());
    stats.sweeps = 1;
    stats.last_change = 0.0;
    return stats;
  }

  Eigen::MatrixXd prev(data.rows(), data.cols());
  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    prev = data;
    for (const auto& g : groups) demean_group(data, g);
    stats.sweeps = sweep;
    stats.last_change = (data - prev).cwiseAbs().maxCoeff();
    if (stats.last_change < opts.tol) return stats;
  }
  throw EstimationError("fixed-effect absorption did not converge after " +
                        std::to_string(opts.max_sweeps) + " sweeps (last change " +
                        std::to_string(stats.last_change) + ")");
}

std::int64_t absorbed_dof(const std::vector<FeGroup>& groups) {
  if (groups.empty()) return 0;
  const std::size_t n = groups.front().codes.size();

  // Finest groups first so coarsenings of an already-counted group add 0.
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return groups[a].n_levels > groups[b].n_levels;
  });

  auto refines = [&](const FeGroup& fine, const FeGroup& coarse) {
    // fine refines coarse iff the coarse code is constant within each fine level
    std::vector<std::int32_t> seen(std::size_t(fine.n_levels), -1);
    for (std::size_t i = 0; i < n; ++i) {
      std::int32_t& s = seen[std::size_t(fine.codes[i])];
      if (s < 0) {
        s = coarse.codes[i];
      } else if (s != coarse.codes[i]) {
        return false;
      }
    }
    return true;
  };

  std::int64_t dof = 0;
  std::vector<std::size_t> counted;
  for (std::size_t gi : order) {
    bool redundant = false;
    for (std::size_t prev : counted) {
      if (refines(groups[prev], groups[gi])) {
        redundant = true;
        break;
      }
    }
    if (redundant) continue;
    dof += counted.empty() ? groups[gi].n_levels : groups[gi].n_levels - 1;
    counted.push_back(gi);
  }
  return dof;
}

}  // namespace gridpanel
