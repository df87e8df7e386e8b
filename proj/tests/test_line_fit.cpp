#include <gtest/gtest.h>

#include <cmath>

#include "translab/depth.hpp"
#include "translab/line_fit.hpp"
#include "translab/sampling.hpp"

using namespace translab;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST(FitLine, CollinearCentersGiveCenterLine) {
  const BallFamily f{Ball(vec({0, 0, 0}), 1.0), Ball(vec({4, 0, 0}), 1.0), Ball(vec({8, 0, 0}), 1.0)};
  auto r = fit_line(f, canonicalize_line(vec({0, 0.3, 0.2}), vec({1, 0.1, -0.05})));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, -1.0, 1e-9);
  EXPECT_LT(std::abs(std::abs(r.line.direction().vec()[0]) - 1.0), 1e-9);
}

TEST(FitLine, PlanarMinimumMatchesExactSweep) {
  Rng rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    BallFamily f;
    for (int i = 0; i < 4; ++i) f.emplace_back(vec({uniform(rng, -3, 3), uniform(rng, -3, 3)}), uniform(rng, 0.5, 1.5));
    const auto exact = min_depth_2d_exact(f);
    // Start near the optimal angle; planar depth can have several local minima in the angle.
    const double th = exact.angle + uniform(rng, -0.002, 0.002);
    const UnitDirection v(vec({std::cos(th), std::sin(th)}));
    LineFitOptions opt;
    opt.start_slack = 1e-3;  // keep the barrier inside the start's basin
    auto r = fit_line(f, witness_line(v, depth(f, v).witness), opt);
    EXPECT_NEAR(r.value, exact.min_depth, 1e-8) << "trial " << trial;
  }
}

TEST(FitLine, NeverWorseThanDepthAtStart) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 3 + trial % 3;
    BallFamily f;
    for (int i = 0; i < 6; ++i) f.emplace_back(random_unit_vector(rng, d) * 4.0, uniform(rng, 0.3, 1.0));
    const UnitDirection v(random_unit_vector(rng, d));
    const auto dep = depth(f, v);
    auto r = fit_line(f, witness_line(v, dep.witness));
    EXPECT_LE(r.value, dep.value + 1e-9);
  }
}

TEST(FitLine, RespectsConeConstraint) {
  const BallFamily f{Ball(vec({0, 0}), 1.0), Ball(vec({0, 4}), 1.0)};
  // Best lines run vertically; confine direction to {v : v·(1, −0.2) > 0}.
  LineFitOptions opt;
  opt.cone_normals.push_back(vec({1, -0.2}).normalized());
  auto r = fit_line(f, canonicalize_line(vec({0, 0}), vec({1, 0})), opt);
  EXPECT_GT(opt.cone_normals[0].dot(r.line.direction().vec()), 0.0);
  EXPECT_LT(r.value, 0.0);
}

TEST(FitLine, RejectsStartOutsideCone) {
  const BallFamily f{Ball(vec({0, 0}), 1.0), Ball(vec({0, 4}), 1.0)};
  LineFitOptions opt;
  opt.cone_normals.push_back(vec({1, 0}));
  EXPECT_THROW(fit_line(f, canonicalize_line(vec({0, 0}), vec({-1, 0})), opt), PreconditionError);
}
