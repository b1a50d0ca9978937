#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "gridpanel/absorb.hpp"
#include "gridpanel/errors.hpp"

using namespace gridpanel;

namespace {

Eigen::MatrixXd dummies(const FeGroup& g) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(Eigen::Index(g.codes.size()), g.n_levels);
  for (std::size_t i = 0; i < g.codes.size(); ++i) {
    d(Eigen::Index(i), g.codes[i]) = 1.0;
  }
  return d;
}

// Residual from projecting each column on the stacked group dummies.
Eigen::MatrixXd project_out(const Eigen::MatrixXd& data, const std::vector<FeGroup>& groups) {
  Eigen::Index cols = 0;
  for (const auto& g : groups) cols += g.n_levels;
  Eigen::MatrixXd d(data.rows(), cols);
  Eigen::Index at = 0;
  for (const auto& g : groups) {
    d.middleCols(at, g.n_levels) = dummies(g);
    at += g.n_levels;
  }
  // The stacked dummies are rank deficient, so use the complete orthogonal
  // decomposition: its solve() is a genuine least-squares minimizer.
  return data - d * d.completeOrthogonalDecomposition().solve(data);
}

}  // namespace

TEST_CASE("groups infer level counts and reject negative codes") {
  auto g = make_group("entity", {2, 0, 2, 1});
  CHECK(g.n_levels == 3);
  CHECK_THROWS_AS(make_group("entity", {0, -1}), DomainError);
}

TEST_CASE("a single group demeans in exactly one pass") {
  Eigen::MatrixXd data(5, 2);
  data << 1, 10, 3, 14, 5, 20, 7, 26, 9, 35;
  std::vector<FeGroup> groups{make_group("g", {0, 0, 1, 1, 1})};
  auto stats = absorb_fixed_effects(data, groups);
  CHECK(stats.sweeps == 1);
  CHECK(data(0, 0) == -1.0);
  CHECK(data(1, 0) == 1.0);
  CHECK(data(2, 0) == -2.0);
  CHECK(data(4, 0) == 2.0);
  CHECK(data(0, 1) == -2.0);
  CHECK(data(2, 1) == -7.0);
  CHECK(data(4, 1) == 8.0);
}

TEST_CASE("alternating demeaning matches the dummy-variable projection") {
  const Eigen::Index n = 24;
  Eigen::MatrixXd data(n, 2);
  std::vector<std::int32_t> g1(24), g2(24);
  for (Eigen::Index i = 0; i < n; ++i) {
    data(i, 0) = double((i * 37) % 19) - 9.0 + 0.5 * double((i * 11) % 7);
    data(i, 1) = double((i * 13) % 23) * 0.25 - 2.0;
    g1[std::size_t(i)] = std::int32_t(i % 4);
    g2[std::size_t(i)] = std::int32_t((i / 3) % 5);
  }
  std::vector<FeGroup> groups{make_group("a", g1), make_group("b", g2)};
  Eigen::MatrixXd oracle = project_out(data, groups);
  auto stats = absorb_fixed_effects(data, groups);
  CHECK(stats.sweeps >= 1);
  CHECK((data - oracle).cwiseAbs().maxCoeff() < 1e-8);

  // Every group mean of the absorbed data is numerically zero.
  for (const auto& g : groups) {
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(g.n_levels, data.cols());
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(g.n_levels);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(g.codes[std::size_t(i)]) += data.row(i);
      counts[g.codes[std::size_t(i)]] += 1.0;
    }
    for (Eigen::Index l = 0; l < g.n_levels; ++l) {
      CHECK((sums.row(l) / counts[l]).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("absorption reports non-convergence honestly") {
  Eigen::MatrixXd data(6, 1);
  data << 1, 2, 3, 4, 5, 6;
  std::vector<FeGroup> groups{make_group("a", {0, 0, 1, 1, 2, 2}),
                              make_group("b", {0, 1, 1, 2, 2, 0})};
  AbsorbOptions opts;
  opts.tol = 0.0;
  opts.max_sweeps = 1;
  CHECK_THROWS_AS(absorb_fixed_effects(data, groups, opts), EstimationError);
}

TEST_CASE("absorption validates shape and finiteness") {
  Eigen::MatrixXd data(3, 1);
  data << 1, 2, 3;
  std::vector<FeGroup> short_group{make_group("a", {0, 1})};
  CHECK_THROWS_AS(absorb_fixed_effects(data, short_group, {}), DomainError);
  data(1, 0) = std::nan("");
  std::vector<FeGroup> ok{make_group("a", {0, 1, 1})};
  CHECK_THROWS_AS(absorb_fixed_effects(data, ok, {}), DomainError);
}

TEST_CASE("singleton removal iterates until stable") {
  std::vector<FeGroup> groups{make_group("entity", {0, 0, 1}), make_group("month", {0, 1, 1})};
  auto kept = drop_singletons(groups);
  CHECK(kept.empty());
  CHECK(groups[0].codes.empty());
  CHECK(groups[0].n_levels == 0);
}

TEST_CASE("singleton removal keeps supported rows and recodes compactly") {
  std::vector<FeGroup> groups{make_group("a", {0, 0, 1, 1, 2}), make_group("b", {0, 1, 1, 0, 0})};
  auto kept = drop_singletons(groups);
  CHECK(kept == std::vector<Eigen::Index>{0, 1, 2, 3});
  CHECK(groups[0].codes == std::vector<std::int32_t>{0, 0, 1, 1});
  CHECK(groups[0].n_levels == 2);
  CHECK(groups[1].codes == std::vector<std::int32_t>{0, 1, 1, 0});
  CHECK(groups[1].n_levels == 2);
}

TEST_CASE("sparse level codes are recoded compactly even without drops") {
  std::vector<FeGroup> groups{make_group("a", {5, 5, 7, 7})};
  auto kept = drop_singletons(groups);
  CHECK(kept.size() == 4);
  CHECK(groups[0].codes == std::vector<std::int32_t>{0, 0, 1, 1});
  CHECK(groups[0].n_levels == 2);
}

TEST_CASE("mismatched group lengths are rejected") {
  std::vector<FeGroup> groups{make_group("a", {0, 1}), make_group("b", {0, 1, 2})};
  CHECK_THROWS_AS(drop_singletons(groups), DomainError);
}

TEST_CASE("absorbed parameter count on a balanced crossed panel") {
  // 3 entities x 12 months x 2 years, with the entity-month interaction.
  std::vector<std::int32_t> entity, month, year, inter;
  for (std::int32_t e = 0; e < 3; ++e) {
    for (std::int32_t m = 0; m < 12; ++m) {
      for (std::int32_t y = 0; y < 2; ++y) {
        entity.push_back(e);
        month.push_back(m);
        year.push_back(y);
        inter.push_back(e * 12 + m);
      }
    }
  }
  std::vector<FeGroup> groups{make_group("entity", entity), make_group("month", month),
                              make_group("year", year), make_group("entity_month", inter)};
  CHECK(absorbed_dof(groups) == 37);

  std::vector<FeGroup> no_inter{make_group("entity", entity), make_group("month", month),
                                make_group("year", year)};
  CHECK(absorbed_dof(no_inter) == 3 + 11 + 1);

  std::vector<FeGroup> seasonal{make_group("month", month), make_group("year", year)};
  CHECK(absorbed_dof(seasonal) == 12 + 1);

  std::vector<FeGroup> intercept{make_group("const", std::vector<std::int32_t>(72, 0))};
  CHECK(absorbed_dof(intercept) == 1);

  CHECK(absorbed_dof({}) == 0);
}
