#include <gtest/gtest.h>

#include <cmath>

#include "translab/geometry.hpp"
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

TEST(Ball, RejectsNonPositiveRadius) {
  EXPECT_THROW(Ball(vec({0, 0}), 0.0), PreconditionError);
  EXPECT_THROW(Ball(vec({0, 0}), -1.0), PreconditionError);
  EXPECT_THROW(Ball(vec({0, NAN}), 1.0), PreconditionError);
}

TEST(UnitDirection, RequiresUnitLength) {
  EXPECT_THROW(UnitDirection(vec({1, 1})), PreconditionError);
  EXPECT_NO_THROW(UnitDirection(vec({0, 1})));
}

TEST(ProjectBall, AlongAxis) {
  auto p = project_ball(Ball(vec({0, 0, 0}), 1.0), UnitDirection(vec({0, 0, 1})));
  EXPECT_NEAR(p.center().norm(), 0.0, 1e-15);
  EXPECT_EQ(p.radius(), 1.0);

  auto q = project_ball(Ball(vec({3, 4, 5}), 2.0), UnitDirection(vec({0, 0, 1})));
  EXPECT_NEAR(q.center().norm(), 5.0, 1e-12);  // frame is some rotation of the (x, y) plane
  EXPECT_EQ(q.radius(), 2.0);

  auto r = project_ball(Ball(vec({1, 0, 0}), 1.0), UnitDirection::normalized(vec({1, 0, 0})));
  EXPECT_NEAR(r.center().norm(), 0.0, 1e-15);
}

TEST(ProjectBall, TwoStepProjectionPreservesDistances) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Vector a = random_unit_vector(rng, 5) * 3.0, b = random_unit_vector(rng, 5) * 2.0;
    const UnitDirection v = UnitDirection(random_unit_vector(rng, 5));
    Vector w = random_unit_vector(rng, 5);
    w -= w.dot(v.vec()) * v.vec();
    const UnitDirection vw = UnitDirection::normalized(w);

    // Project along v, then along the image of w inside v^⟂.
    const Matrix f1 = hyperplane_frame(v);
    const UnitDirection w1 = UnitDirection::normalized(f1.transpose() * vw.vec());
    const Ball a2 = project_ball(project_ball(Ball(a, 1.0), v), w1);
    const Ball b2 = project_ball(project_ball(Ball(b, 1.0), v), w1);

    // Direct projection onto span{v, w}^⟂.
    Matrix span(5, 2);
    span << v.vec(), vw.vec();
    const Vector da = a - span * (span.transpose() * a), db = b - span * (span.transpose() * b);
    EXPECT_NEAR((a2.center() - b2.center()).norm(), (da - db).norm(), 1e-10);
  }
}

TEST(HyperplaneFrame, OrthonormalAndDeterministic) {
  Rng rng(3);
  for (int d = 2; d <= 7; ++d) {
    const Vector v = random_unit_vector(rng, d);
    const Matrix f = hyperplane_frame(v);
    EXPECT_LT((f.transpose() * f - Matrix::Identity(d - 1, d - 1)).norm(), 1e-14);
    EXPECT_LT((f.transpose() * v).norm(), 1e-14);
    EXPECT_EQ(f, hyperplane_frame(v));
  }
}

TEST(SliceBall, SpecExamples) {
  const Ball unit(vec({0, 0, 0}), 1.0);
  const Vector z = vec({0, 0, 1});
  auto eq = slice_ball(unit, AffineSubspace::hyperplane(z, 0.0));
  ASSERT_TRUE(eq);
  EXPECT_NEAR(eq->radius(), 1.0, 1e-15);
  EXPECT_NEAR(eq->center().norm(), 0.0, 1e-15);

  auto mid = slice_ball(unit, AffineSubspace::hyperplane(z, 0.6));
  ASSERT_TRUE(mid);
  EXPECT_NEAR(mid->radius(), 0.8, 1e-15);

  EXPECT_FALSE(slice_ball(unit, AffineSubspace::hyperplane(z, 1.5)));
  EXPECT_FALSE(slice_ball(unit, AffineSubspace::hyperplane(z, 1.0)));  // tangency is empty
}

TEST(SliceBall, PythagorasOnRandomInputs) {
  Rng rng(5);
  int checked = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int d = 2 + trial % 5;
    const Ball b(random_unit_vector(rng, d) * uniform(rng, 0, 2), uniform(rng, 0.2, 2.0));
    const Vector n = random_unit_vector(rng, d);
    const auto e = AffineSubspace::hyperplane(n, uniform(rng, -2, 2));
    const double delta = e.distance(b.center());
    if (auto s = slice_ball(b, e)) {
      EXPECT_NEAR(b.radius() * b.radius(), s->radius() * s->radius() + delta * delta, 1e-10);
      ++checked;
    } else {
      EXPECT_GE(delta, b.radius());
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST(CanonicalizeLine, SpecExamples) {
  auto a = canonicalize_line(vec({0, 0, 5}), vec({0, 0, 2}));
  EXPECT_LT(a.point().norm(), 1e-15);
  EXPECT_EQ(a.direction().vec(), vec({0, 0, 1}));

  auto b = canonicalize_line(vec({1, 0, 3}), vec({0, 0, 1}));
  EXPECT_LT((b.point() - vec({1, 0, 0})).norm(), 1e-15);

  auto c = canonicalize_line(vec({1, 1, 0}), vec({1, 1, 0}) / std::sqrt(2.0));
  EXPECT_LT(c.point().norm(), 1e-15);

  EXPECT_THROW(canonicalize_line(vec({1, 1, 0}), vec({0, 0, 0})), PreconditionError);
}

TEST(CanonicalizeLine, IdempotentAndPointIndependent) {
  Rng rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 2 + trial % 4;
    const Vector p = random_unit_vector(rng, d) * uniform(rng, 0, 10);
    const Vector v = random_unit_vector(rng, d) * uniform(rng, 0.1, 3);
    const auto l = canonicalize_line(p, v);
    EXPECT_LT(std::abs(l.point().dot(l.direction().vec())), 1e-10);
    const auto again = canonicalize_line(l.point(), l.direction().vec());
    EXPECT_LT((again.point() - l.point()).norm(), 1e-10);
    EXPECT_LT((again.direction().vec() - l.direction().vec()).norm(), 1e-15);
    const auto shifted = canonicalize_line(p + 4.2 * v, v);
    EXPECT_LT((shifted.point() - l.point()).norm(), 1e-10);
  }
}

TEST(LineBallIntersection, SpecExamples) {
  const auto z_axis = canonicalize_line(vec({0, 0, 0}), vec({0, 0, 1}));
  auto c = line_ball_intersection(z_axis, Ball(vec({0, 0, 0}), 1.0));
  ASSERT_TRUE(c);
  EXPECT_DOUBLE_EQ(c->t_in, -1.0);
  EXPECT_DOUBLE_EQ(c->t_mid, 0.0);
  EXPECT_DOUBLE_EQ(c->t_out, 1.0);

  EXPECT_FALSE(line_ball_intersection(z_axis, Ball(vec({2, 0, 0}), 1.0)));

  auto off = line_ball_intersection(z_axis, Ball(vec({0.5, 0, 3}), 1.0));
  ASSERT_TRUE(off);
  EXPECT_DOUBLE_EQ(off->t_mid, 3.0);
  EXPECT_NEAR(off->t_out - off->t_mid, std::sqrt(0.75), 1e-15);
}

TEST(LineBallIntersection, MidpointIsCenterProjection) {
  Rng rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto l = canonicalize_line(random_unit_vector(rng, 3), random_unit_vector(rng, 3));
    const Vector c = l.at(uniform(rng, -5, 5)) + 0.3 * random_unit_vector(rng, 3);
    auto chord = line_ball_intersection(l, Ball(c, 1.0));
    ASSERT_TRUE(chord);
    EXPECT_NEAR(chord->t_mid, (c - l.point()).dot(l.direction().vec()), 1e-12);
  }
}

TEST(AffineSubspace, RejectsNonOrthonormalBasis) {
  Matrix basis(3, 2);
  basis << 1, 1, 0, 1, 0, 0;
  EXPECT_THROW(AffineSubspace(vec({0, 0, 0}), basis), PreconditionError);
  EXPECT_NO_THROW(AffineSubspace::from_span(vec({0, 0, 0}), basis));
}

TEST(SphereHelpers, SlerpAndExpMap) {
  const UnitDirection a(vec({1, 0, 0})), b(vec({0, 1, 0}));
  EXPECT_NEAR(geodesic_angle(a, b), M_PI / 2, 1e-15);
  const auto mid = slerp(a, b, 0.5);
  EXPECT_NEAR(geodesic_angle(a, mid), M_PI / 4, 1e-15);
  const auto e = exp_map(a, vec({0, 1, 0}), M_PI / 2);
  EXPECT_LT((e.vec() - b.vec()).norm(), 1e-15);
}
