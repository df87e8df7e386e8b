#include <gtest/gtest.h>

#include <cmath>

#include "translab/appendix.hpp"

using namespace translab;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST(QabParams, RejectsInvalid) {
  EXPECT_THROW(QabParams(1.0, 3.0), PreconditionError);
  EXPECT_THROW(QabParams(-0.1, 3.0), PreconditionError);
  EXPECT_THROW(QabParams(0.5, 1.5), PreconditionError);  // δ = 2.25 + 1 − 4 < 0
  EXPECT_THROW(QabParams(0.5, 0.0), PreconditionError);
  EXPECT_NO_THROW(QabParams(0.9, 1.0));
}

TEST(EvalG, SymmetricPointValue) {
  const QabParams p(0.9, 1.0);
  EXPECT_NEAR(eval_G(p, 0.0, 0.0), 1.0588236387454202, 1e-14);
  EXPECT_THROW(eval_G(p, 0.0, 0.5), PreconditionError);
}

TEST(EvalSample, ClosedHessianMatchesFiniteDifferences) {
  const QabParams p(0.5, 1.8);
  for (const auto& [z, w] : sample_lune(p, 50, 0.02)) {
    const auto s = eval_sample(p, z, w, {1e-4, true});
    EXPECT_LE(hessian_rel_error(s), 1e-6) << z << " " << w;
  }
}

TEST(Identities, HoldAtModerateParameters) {
  const auto rep = check_identities(QabParams(0.5, 1.8), 500);
  EXPECT_EQ(rep.samples, 500u);
  EXPECT_TRUE(rep.passed());
  for (const auto& [name, err] : rep.max_rel_error) EXPECT_LE(err, 1e-9) << name;
}

TEST(Identities, HoldNearCriticalParameters) {
  // δ = 0.0104: the identities lose about two digits to cancellation, so 1e-7 relative.
  const QabParams p(0.99, 0.3);
  const auto rep = check_identities(p, 300, 1e-7);
  EXPECT_GT(rep.samples, 0u);
  EXPECT_TRUE(rep.passed());
  for (const auto& v : rep.violations) ADD_FAILURE() << v.name << " rel " << v.rel_error;
  for (const auto& v : rep.sign_violations) ADD_FAILURE() << v.name << " at " << v.z << "," << v.w;
}

TEST(Identities, SweepOverParameters) {
  const auto rep = check_identities_sweep(10000);
  EXPECT_EQ(rep.samples, 10000u);
  EXPECT_TRUE(rep.passed());
  for (const auto& [name, err] : rep.max_rel_error) EXPECT_LE(err, 1e-7) << name;
  for (const auto& v : rep.violations) ADD_FAILURE() << v.name << " b=" << v.b << " e=" << v.e << " rel " << v.rel_error;
}

TEST(Identities, DeltaCombinesDeterminantTerms) {
  const QabParams p(0.3, 2.5);
  const auto s = eval_sample(p, 0.2, -0.1);
  EXPECT_NEAR(s.Delta, (1.0 - s.f * s.f) * s.Delta1 + s.f * s.Delta2, 1e-10 * std::abs(s.Delta));
  const auto& H = s.hessian_closed;
  EXPECT_NEAR(H.determinant(), det_hessian_closed(s), 1e-10 * std::abs(H.determinant()));
}

TEST(Concavity, SymmetricPointAndSlice) {
  const QabParams p(0.9, 1.0);
  const auto s = eval_sample(p, 0.0, 0.0);
  EXPECT_LT(s.hessian_fd(0, 0), 0.0);
  EXPECT_GT(s.hessian_fd.determinant(), 0.0);
  const auto rep = check_concavity(p, 200);
  EXPECT_TRUE(rep.passed());
  EXPECT_GT(rep.slice_samples, 0u);
}

TEST(Concavity, SweepOverParameters) {
  const auto rep = check_concavity_sweep(1000);
  EXPECT_GT(rep.samples, 900u);
  EXPECT_LE(rep.max_hessian_rel_error, 1e-4);
  EXPECT_TRUE(rep.passed()) << "gzz " << rep.gzz_violations << " det " << rep.det_violations << " sign "
                            << rep.sign_disagreements << " hess " << rep.max_hessian_rel_error;
}

TEST(Concavity, RejectsBadStep) {
  ConcavityOptions opt;
  opt.fd.step = 1e-2;
  EXPECT_THROW(check_concavity(QabParams(0.5, 1.8), 10, opt), PreconditionError);
}

TEST(Concavity, ThinLuneIsReportedEmpty) {
  EXPECT_TRUE(check_concavity(QabParams(0.995, 0.2), 10).domain_empty);
}

TEST(NormalForm, StandardPlacementIsIdentity) {
  const Ball a(vec({0, 0, 0, -0.5}), 1.0), b(vec({1.8, 0, 0, 0.5}), 1.0);
  const auto nf = reduce_to_normal_form(a, b);
  ASSERT_TRUE(nf.params);
  EXPECT_NEAR(nf.params->b, 0.5, 1e-14);
  EXPECT_NEAR(nf.params->e, 1.8, 1e-14);
  EXPECT_NEAR(nf.phi, 0.0, 1e-14);
  const auto n = nf.to_normal(0.1, 0.2);
  EXPECT_NEAR(n[0], 0.1, 1e-14);
  EXPECT_NEAR(n[1], 0.2, 1e-14);
}

TEST(QabConvexity, RandomFramesAndPlacements) {
  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const double r = log_uniform(rng, 0.3, 3.0);
    Vector ca(4), cb(4);
    do {
      for (int k = 0; k < 4; ++k) {
        ca[k] = uniform(rng, -3.0, 3.0) * r;
        cb[k] = uniform(rng, -3.0, 3.0) * r;
      }
      // Keep the zw-separation below 2r so the lune is non-empty.
      cb[2] = ca[2] + uniform(rng, -1.2, 1.2) * r;
      cb[3] = ca[3] + uniform(rng, -1.2, 1.2) * r;
    } while (!((ca - cb).norm() > 2.0 * r));
    const auto frame = random_frame(rng);
    const Ball a(ca, r), b(cb, r);
    // In the standard frame the zw-separation is controlled; a random frame reshuffles it.
    const auto rep = check_Qab_convexity(a, b, 500);
    EXPECT_FALSE(rep.degenerate);
    EXPECT_EQ(rep.violations.size(), 0u) << "trial " << trial << " max excess " << rep.max_excess;
    EXPECT_LE(rep.max_frame_mismatch, 1e-12);
    const auto rot = check_Qab_convexity(a, b, 500, frame);
    if (!rot.degenerate) {
      EXPECT_EQ(rot.violations.size(), 0u) << "rotated trial " << trial;
      EXPECT_LE(rot.max_frame_mismatch, 1e-12);
    }
  }
}

TEST(QabConvexity, NonCongruentIsExploratory) {
  const Ball a(vec({0, 0, 0, -0.3}), 1.0), b(vec({2.5, 0, 0, 0.3}), 0.6);
  const auto rep = check_Qab_convexity(a, b, 200);
  EXPECT_FALSE(rep.congruent);
  EXPECT_EQ(rep.trials, 200u);
}
