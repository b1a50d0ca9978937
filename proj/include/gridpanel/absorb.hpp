#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace gridpanel {

struct FeGroup {
  std::string name;
  std::vector<std::int32_t> codes;  // per-row level index, 0..n_levels-1
  std::int32_t n_levels = 0;
};

FeGroup make_group(std::string name, std::vector<std::int32_t> codes);

struct AbsorbOptions {
  double tol = 1e-10;    // max absolute column change per sweep
  int max_sweeps = 500;
};

struct AbsorbStats {
  int sweeps = 0;
  double last_change = 0.0;
};

// Iteratively removes rows that are alone in a level of any group, recoding
// levels compactly. Returns kept row indices in ascending order.
std::vector<Eigen::Index> drop_singletons(std::vector<FeGroup>& groups);

// Alternating within-group demeaning of every column, iterated to the given
// tolerance. A single group needs exactly one pass. Throws EstimationError
// when max_sweeps is reached while still above tolerance.
AbsorbStats absorb_fixed_effects(Eigen::Ref<Eigen::MatrixXd> data,
                                 const std::vector<FeGroup>& groups,
                                 const AbsorbOptions& opts = {});

// Parameters absorbed by the groups: counting finest-first, a group refined
// by an already-counted one adds nothing, the first counted group adds its
// level count, and every later one adds levels-1. Exact for connected
// designs.
std::int64_t absorbed_dof(const std::vector<FeGroup>& groups);

}  // namespace gridpanel
