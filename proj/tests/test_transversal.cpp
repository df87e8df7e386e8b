#include <gtest/gtest.h>

#include <cmath>

#include "translab/sampling.hpp"
#include "translab/transversal.hpp"

using namespace translab;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

BallSequence collinear_three() {
  return BallSequence({Ball(vec({0, 0, 0}), 1.0), Ball(vec({4, 0, 0}), 1.0), Ball(vec({8, 0, 0}), 1.0)});
}

/// Balls of radius in [0.3, 1] jittered around the x-axis, rejected until pairwise-inflatable.
BallSequence near_axis_sequence(Rng& rng, int n, int d) {
  for (;;) {
    BallFamily f;
    for (int i = 0; i < n; ++i) {
      Vector c = random_unit_vector(rng, d) * uniform(rng, 0.0, 0.25);
      c[0] = 3.0 * i;
      f.emplace_back(c, uniform(rng, 0.3, 1.0));
    }
    if (is_pairwise_inflatable(f)) return BallSequence(f);
  }
}

}  // namespace

TEST(BallSequence, RejectsOverlapAndBadOrder) {
  EXPECT_THROW(BallSequence({Ball(vec({0, 0}), 1.0), Ball(vec({1.5, 0}), 1.0)}), PreconditionError);
  EXPECT_THROW(BallSequence({Ball(vec({0, 0}), 1.0), Ball(vec({4, 0}), 1.0)}, {0, 0}), PreconditionError);
  EXPECT_THROW(BallSequence({Ball(vec({0, 0}), 1.0), Ball(vec({4, 0}), 1.0)}, {0, 2}), PreconditionError);
}

TEST(BallSequence, RestrictionKeepsRelativeOrder) {
  const BallSequence s({Ball(vec({0, 0}), 1.0), Ball(vec({4, 0}), 1.0), Ball(vec({8, 0}), 1.0)}, {2, 0, 1});
  const auto sub = s.restricted_to({0, 2});
  // Ball 2 precedes ball 0 in s, so in the sub-sequence (indices 0 → ball 0, 1 → ball 2) the order is (1, 0).
  EXPECT_EQ(sub.order(), (Permutation{1, 0}));
}

TEST(DirectionCone, MembershipExamples) {
  const BallSequence s({Ball(vec({0, 0}), 1.0), Ball(vec({4, 0}), 1.0)});
  const DirectionCone dc(s);
  EXPECT_TRUE(in_direction_cone(dc, UnitDirection(vec({1, 0}))));
  EXPECT_FALSE(in_direction_cone(dc, UnitDirection(vec({0, 1}))));
  EXPECT_FALSE(in_direction_cone(dc, UnitDirection(vec({-1, 0}))));
}

TEST(DirectionCone, ConsecutiveNormalsDescribeTheSameCone) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = near_axis_sequence(rng, 5, 3);
    const DirectionCone dc(s);
    for (int k = 0; k < 50; ++k) {
      const Vector v = random_unit_vector(rng, 3);
      EXPECT_EQ(dc.contains(v), dc.margin(v) > 0.0);
    }
  }
}

TEST(InducedOrder, AxisExamples) {
  const auto s = collinear_three();
  EXPECT_EQ(*induced_order(s.balls(), UnitDirection(vec({1, 0, 0}))), (Permutation{0, 1, 2}));
  EXPECT_EQ(*induced_order(s.balls(), UnitDirection(vec({-1, 0, 0}))), (Permutation{2, 1, 0}));
  EXPECT_FALSE(induced_order(s.balls(), UnitDirection(vec({0, 1, 0}))));
}

TEST(InducedOrder, MatchesChordMidpointsAndReverses) {
  Rng rng(22);
  int checked = 0;
  while (checked < 10000) {
    const auto s = near_axis_sequence(rng, 4, 3);
    const Vector jitter = random_unit_vector(rng, 3) * 0.05;
    const UnitDirection v = UnitDirection::normalized(vec({1, 0, 0}) + jitter);
    const auto dep = depth(s.balls(), v);
    if (dep.value > 0.0) continue;
    ++checked;
    const auto order = induced_order(s.balls(), v);
    ASSERT_TRUE(order);
    const auto line = witness_line(v, dep.witness);
    double prev = -1e300;
    for (int i : *order) {
      const auto chord = line_ball_intersection(line, s.balls()[static_cast<std::size_t>(i)]);
      ASSERT_TRUE(chord);
      EXPECT_GT(chord->t_mid, prev);
      prev = chord->t_mid;
    }
    EXPECT_EQ(*induced_order(s.balls(), v.reversed()), reversed_permutation(*order));
  }
}

TEST(FindTransversal, CollinearCenters) {
  const auto s = collinear_three();
  const auto r = find_transversal(s, TransversalMode::order_respecting());
  ASSERT_TRUE(r.found);
  EXPECT_TRUE(r.found->order_respecting);
  EXPECT_EQ(r.found->induced_order, s.order());
  EXPECT_LT(std::abs(r.found->line.direction().vec()[0] - 1.0), 1e-9);
  for (const auto& b : s.balls()) EXPECT_TRUE(line_ball_intersection(r.found->line, b));
}

TEST(FindTransversal, OrderRespectingAlwaysMatchesSequenceOrder) {
  Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    auto s = near_axis_sequence(rng, 5, 3 + trial % 3);
    const Permutation order = trial % 2 ? identity_permutation(5) : reversed_permutation(identity_permutation(5));
    s = BallSequence(s.balls(), order);
    const auto r = find_transversal(s, TransversalMode::order_respecting());
    ASSERT_TRUE(r.found) << "trial " << trial << " best " << r.best_depth;
    EXPECT_EQ(r.found->induced_order, s.order());
    EXPECT_LE(r.found->direction_depth.value, 1e-8);
  }
}

TEST(FindTransversal, UnorderedOrientsAlongSequence) {
  const BallSequence s({Ball(vec({0, 0, 0}), 1.0), Ball(vec({4, 0, 0}), 1.0)}, {1, 0});
  const auto r = find_transversal(s, TransversalMode::unordered());
  ASSERT_TRUE(r.found);
  EXPECT_TRUE(r.found->order_respecting);
}

TEST(FindTransversal, ReportsBestDepthWhenInfeasible) {
  // Three unit discs on a small triangle, far from collinear: no line meets all three.
  const BallSequence s({Ball(vec({0, 0}), 1.0), Ball(vec({6, 0}), 1.0), Ball(vec({3, 6}), 1.0)});
  const auto r = find_transversal(s, TransversalMode::unordered());
  EXPECT_FALSE(r.found);
  EXPECT_GT(r.best_depth, 0.0);
  const auto exact = min_depth_2d_exact(s.balls());
  EXPECT_NEAR(r.best_depth, exact.min_depth, 1e-8);
}

TEST(FindTransversal, CompatibleWithOuterCone) {
  const BallSequence outer({Ball(vec({0, 0}), 1.0), Ball(vec({4, 0.5}), 1.0), Ball(vec({8, 0}), 1.0)});
  const BallSequence inner({Ball(vec({0, 0}), 1.0), Ball(vec({8, 0}), 1.0)});
  const auto r = find_transversal(inner, TransversalMode::compatible_with(outer));
  ASSERT_TRUE(r.found);
  EXPECT_TRUE(DirectionCone(outer).contains(r.found->line.direction().vec()));
}

TEST(FindTransversal, ResultIndependentOfThreadCount) {
  Rng rng(24);
  const auto s = near_axis_sequence(rng, 6, 4);
  setenv("TRANSVERSAL_LAB_THREADS", "1", 1);
  const auto a = find_transversal(s, TransversalMode::order_respecting());
  setenv("TRANSVERSAL_LAB_THREADS", "3", 1);
  const auto b = find_transversal(s, TransversalMode::order_respecting());
  unsetenv("TRANSVERSAL_LAB_THREADS");
  ASSERT_TRUE(a.found && b.found);
  EXPECT_EQ(a.found->line.direction().vec(), b.found->line.direction().vec());
}

TEST(BarycentricTransversal, Examples) {
  const UnitDirection z(vec({0, 0, 1}));
  const BallSequence single({Ball(vec({1, 2, 3}), 1.0)});
  EXPECT_LT((barycentric_transversal(single, z).point() - vec({1, 2, 0})).norm(), 1e-12);

  const BallSequence stacked({Ball(vec({1, 2, 0}), 1.0), Ball(vec({1, 2, 5}), 1.0)});
  EXPECT_LT((barycentric_transversal(stacked, z).point() - vec({1, 2, 0})).norm(), 1e-12);

  // Centers one apart along the first frame axis of z^⊥: the centroid is the midpoint.
  const Matrix frame = hyperplane_frame(z);
  const Vector c2 = frame.col(0) + vec({0, 0, 4});
  const BallSequence lens({Ball(vec({0, 0, 0}), 1.0), Ball(c2, 1.0)});
  const Vector expect = 0.5 * frame.col(0);
  EXPECT_LT((barycentric_transversal(lens, z).point() - expect).norm(), 1e-12);

  EXPECT_THROW(barycentric_transversal(BallSequence({Ball(vec({0, 0, 0}), 1.0), Ball(vec({4, 0, 0}), 1.0)}), z),
               PreconditionError);
}
