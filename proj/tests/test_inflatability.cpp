#include <gtest/gtest.h>

#include <cmath>

#include "translab/inflatability.hpp"
#include "translab/sampling.hpp"

using namespace translab;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

BallFamily pair_at(double gap, double r1 = 1.0, double r2 = 1.0) {
  return {Ball(vec({0, 0, 0}), r1), Ball(vec({gap, 0, 0}), r2)};
}

}  // namespace

TEST(PairwiseInflatable, DefiningInequality) {
  auto ok = pairwise_inflatability(pair_at(2.1));
  EXPECT_TRUE(ok.holds);
  ASSERT_EQ(ok.margins.size(), 1u);
  EXPECT_NEAR(ok.margins[0].margin, 0.41, 1e-12);
  EXPECT_FALSE(is_pairwise_inflatable(pair_at(2.0)));
  EXPECT_TRUE(is_pairwise_inflatable(pair_at(1.42, 0.01, 1.0)));  // 2.0164 > 2.0002
  EXPECT_FALSE(is_pairwise_inflatable(pair_at(1.414, 0.01, 1.0)));
  EXPECT_TRUE(is_pairwise_inflatable({Ball(vec({0, 0}), 1.0)}));
}

TEST(ThinlyDistributed, SeparatesFromInflatable) {
  EXPECT_TRUE(is_thinly_distributed(pair_at(4.1)));
  EXPECT_FALSE(is_thinly_distributed(pair_at(2.1)));
  EXPECT_TRUE(is_pairwise_inflatable(pair_at(2.1)));
  EXPECT_FALSE(is_thinly_distributed({Ball(vec({0, 0}), 0.5), Ball(vec({2, 0}), 0.5)}));
}

TEST(Predicates, Nesting) {
  Rng rng(17);
  for (int trial = 0; trial < 10000; ++trial) {
    const int d = 2 + trial % 4;
    BallFamily f;
    for (int i = 0; i < 4; ++i) f.emplace_back(random_unit_vector(rng, d) * uniform(rng, 0, 6), uniform(rng, 0.1, 1.5));
    if (is_thinly_distributed(f)) EXPECT_TRUE(is_pairwise_inflatable(f));
    if (is_pairwise_inflatable(f)) EXPECT_TRUE(is_pairwise_disjoint(f));
  }
}

TEST(SliceFamily, DropsMissedBallsAndRejectsFullDimension) {
  BallFamily f{Ball(vec({0, 0, 0}), 1.0), Ball(vec({0, 0, 5}), 1.0)};
  auto r = slice_family(f, AffineSubspace::hyperplane(vec({0, 0, 1}), 0.0));
  EXPECT_EQ(r.sections.size(), 1u);
  ASSERT_EQ(r.dropped.size(), 1u);
  EXPECT_EQ(r.dropped[0], 1);
  EXPECT_THROW(slice_family(f, AffineSubspace(vec({0, 0, 0}), Matrix::Identity(3, 3))), PreconditionError);
}

TEST(SliceFamily, PreservesInflatabilityOfCutPairs) {
  Rng rng(23);
  int cut = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const int d = 3 + trial % 3;
    const Vector c1 = random_unit_vector(rng, d) * uniform(rng, 0, 1);
    const double r1 = uniform(rng, 0.3, 1.0), r2 = uniform(rng, 0.3, 1.0);
    const double gap = std::sqrt(2.0 * (r1 * r1 + r2 * r2)) * uniform(rng, 1.0001, 1.5);
    BallFamily f{Ball(c1, r1), Ball(c1 + gap * random_unit_vector(rng, d), r2)};
    ASSERT_TRUE(is_pairwise_inflatable(f));
    const Vector n = random_unit_vector(rng, d);
    auto r = slice_family(f, AffineSubspace::hyperplane(n, n.dot(c1) + uniform(rng, -0.5, 0.5)));
    if (r.dropped.empty()) {
      ++cut;
      EXPECT_TRUE(is_pairwise_inflatable(r.sections));
    }
  }
  EXPECT_GT(cut, 200);
}

TEST(InflatePair, WorkedExample) {
  const Ball a(vec({0, 0}), 1.0), b(vec({2, 0}), 0.5);
  auto res = inflate_pair(a, b, 0.5);
  EXPECT_NEAR(res.delta1, 0.5, 1e-15);
  EXPECT_NEAR(res.delta2, 1.0, 1e-15);
  EXPECT_NEAR(res.common_radius, std::sqrt(1.25), 1e-15);
  EXPECT_NEAR((res.b1.center() - res.b2.center()).squaredNorm(), 6.25, 1e-14);
  EXPECT_NEAR(res.disjointness_margin, 1.25, 1e-14);
  EXPECT_FALSE(res.swapped);
  EXPECT_FALSE(res.equal_radius_branch);
}

TEST(InflatePair, EqualRadiusBranch) {
  const Ball a(vec({0, 0}), 1.0), b(vec({2.1, 0}), 1.0);
  auto res = inflate_pair(a, b);
  EXPECT_TRUE(res.equal_radius_branch);
  EXPECT_NEAR(res.b1.radius(), res.b2.radius(), 1e-15);
  EXPECT_GT(res.disjointness_margin, 0.0);
  auto back = slice_family({res.b1, res.b2}, base_hyperplane(2));
  ASSERT_EQ(back.sections.size(), 2u);
  EXPECT_NEAR(back.sections[1].radius(), 1.0, 1e-12);
}

TEST(InflatePair, SwapsSmallerFirstInput) {
  const Ball a(vec({0, 0}), 0.5), b(vec({2, 0}), 1.0);
  auto res = inflate_pair(a, b);
  EXPECT_TRUE(res.swapped);
  auto back = slice_family({res.b1, res.b2}, base_hyperplane(2));
  ASSERT_EQ(back.sections.size(), 2u);
  EXPECT_NEAR(back.sections[0].radius(), 0.5, 1e-12);
  EXPECT_NEAR(back.sections[1].radius(), 1.0, 1e-12);
}

TEST(InflatePair, RejectsBadInput) {
  EXPECT_THROW(inflate_pair(Ball(vec({0, 0}), 1.0), Ball(vec({2, 0}), 1.0)), PreconditionError);
  const Ball a(vec({0, 0}), 1.0), b(vec({2, 0}), 0.5);
  EXPECT_THROW(inflate_pair(a, b, 0.9), PreconditionError);  // σ² ≥ ρ₁² − ρ₂²
  EXPECT_THROW(inflate_pair(a, b, -0.1), PreconditionError);
}
