#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/random/sobol.hpp>

#include "translab/geometry.hpp"
#include "translab/parallel.hpp"
#include "translab/sampling.hpp"

// Two disjoint unit balls in R⁴ with centers (0,0,0,−b) and (e,0,0,b), sliced by the planes
// H(z,w) parallel to the xy-plane. The oriented lines in H(z,w) meeting the first ball before
// the second have angles |α| ≤ G(z,w) with the x-axis, G = arcsin((R₊ + R₋)/e). Everything
// below evaluates G, its derivatives, and the intermediate quantities of a closed-form proof
// that G is concave on the lune where H(z,w) meets both balls.

namespace translab {

struct QabParams {
  double b;
  double e;

  QabParams(double b_, double e_) : b(b_), e(e_) {
    if (!(b >= 0.0 && b < 1.0)) throw PreconditionError("QabParams: b must lie in [0, 1)");
    if (!(e > 0.0) || !std::isfinite(e)) throw PreconditionError("QabParams: e must be positive");
    if (!(delta() > 0.0)) throw PreconditionError("QabParams: balls must be disjoint (e² + 4b² − 4 > 0)");
  }
  double delta() const { return e * e + 4.0 * b * b - 4.0; }
};

/// The lune {z² + (w+b)² < 1} ∩ {z² + (w−b)² < 1}.
struct LuneDomain {
  QabParams params;

  /// Distance from (z, w) to the lune's boundary, negative outside.
  double interior_margin(double z, double w) const {
    const double dp = std::hypot(z, w + params.b);
    const double dm = std::hypot(z, w - params.b);
    return 1.0 - std::max(dp, dm);
  }
  bool contains(double z, double w, double margin = 0.0) const { return interior_margin(z, w) > margin; }

  double z_half_width() const { return std::sqrt(1.0 - params.b * params.b); }
  double w_half_width() const { return 1.0 - params.b; }

  /// Maps a point of the unit square into the bounding box of the lune.
  std::pair<double, double> from_unit_square(double u, double v) const {
    return {(2.0 * u - 1.0) * z_half_width(), (2.0 * v - 1.0) * w_half_width()};
  }
};

struct AppendixSample {
  double z, w;
  double Rplus, Rminus, f, G;
  double gamma_plus, gamma_minus, gamma, P, S;
  double mu1, mu2, lambda_plus, lambda_minus, theta1, theta2;
  double chi1, chi2, chi1_star, chi2_star, chi_star, chi;
  double Delta, Delta1, Delta2;
  // f and its derivatives from the R-derivative table
  double f_z, f_w, f_zz, f_zw, f_ww, f_zzz;
  Eigen::Matrix2d hessian_closed;  // quotient-rule Hessian of G from the analytic f-derivatives
  Eigen::Matrix2d hessian_fd;      // central differences of G, NaN within 1.5 steps of the rim
  double g;                        // numerator of G_zz: (1 − f²) f_zz + f f_z²
  double g_z;                      // (1 − f²) f_zzz + f_z³
};

namespace detail {

struct RDerivs {
  double R, z, w, zz, zw, ww, zzz;
};

/// R(z, s) = sqrt(1 − z² − s²) and its derivatives, s = w ± b.
inline RDerivs r_derivs(double z, double s) {
  const double R = std::sqrt(1.0 - z * z - s * s);
  const double R3 = R * R * R;
  return {R, -z / R, -s / R, (s * s - 1.0) / R3, -z * s / R3, (z * z - 1.0) / R3, 3.0 * (s * s - 1.0) * z / (R3 * R * R)};
}

}  // namespace detail

inline void require_in_lune(const QabParams& p, double z, double w, double margin) {
  if (!LuneDomain{p}.contains(z, w, margin)) throw PreconditionError("point outside the open lune");
}

inline double eval_G(const QabParams& p, double z, double w) {
  require_in_lune(p, z, w, 0.0);
  const double rp = std::sqrt(1.0 - z * z - (w + p.b) * (w + p.b));
  const double rm = std::sqrt(1.0 - z * z - (w - p.b) * (w - p.b));
  return std::asin((rp + rm) / p.e);
}

struct FdOptions {
  double step = 1e-5;
  bool richardson = false;  // combine steps h and h/2 to cancel the O(h²) term
};

/// Central-difference Hessian of G at (z, w).
inline Eigen::Matrix2d fd_hessian_G(const QabParams& p, double z, double w, const FdOptions& opt = {}) {
  auto hess = [&](double h) {
    auto G = [&](double a, double c) { return eval_G(p, a, c); };
    const double g0 = G(z, w);
    Eigen::Matrix2d H;
    H(0, 0) = (G(z + h, w) - 2.0 * g0 + G(z - h, w)) / (h * h);
    H(1, 1) = (G(z, w + h) - 2.0 * g0 + G(z, w - h)) / (h * h);
    H(0, 1) = H(1, 0) = (G(z + h, w + h) - G(z + h, w - h) - G(z - h, w + h) + G(z - h, w - h)) / (4.0 * h * h);
    return H;
  };
  if (!opt.richardson) return hess(opt.step);
  return (4.0 * hess(0.5 * opt.step) - hess(opt.step)) / 3.0;
}

/// Every quantity of the concavity proof at one point of the lune.
inline AppendixSample eval_sample(const QabParams& p, double z, double w, const FdOptions& fd = {},
                                  double margin = 1e-6) {
  require_in_lune(p, z, w, margin);
  AppendixSample s{};
  s.z = z;
  s.w = w;
  const auto rp = detail::r_derivs(z, w + p.b);
  const auto rm = detail::r_derivs(z, w - p.b);
  const double e = p.e;
  s.Rplus = rp.R;
  s.Rminus = rm.R;
  s.f = (rp.R + rm.R) / e;
  s.G = std::asin(s.f);

  s.gamma_plus = s.Rplus * s.Rplus;
  s.gamma_minus = s.Rminus * s.Rminus;
  s.gamma = 1.0 - z * z - w * w + p.b * p.b;
  s.P = s.gamma_plus * s.gamma_minus;
  s.S = s.gamma_plus + s.gamma_minus;
  const double gp = s.gamma_plus, gm = s.gamma_minus, ga = s.gamma, P = s.P, S = s.S;
  const double sqP = std::sqrt(P);

  s.mu1 = S * S - 2.0 * P;
  s.mu2 = P + ga * (2.0 - ga);
  s.lambda_minus = ga * (ga - 2.0) + 2.0 * gp * (ga - 1.0) + P;
  s.lambda_plus = ga * (ga - 2.0) + 2.0 * gm * (ga - 1.0) + P;
  s.theta1 = 2.0 * S * S - 4.0 * P - S * P - 2.0 * P * ga;
  s.theta2 = 2.0 * (2.0 - ga) - S;
  s.chi1 = s.mu1 * (e * e - S) + P * (s.lambda_plus + s.lambda_minus - 2.0 * s.mu2);
  s.chi2 = s.mu2 * (e * e - S) - 2.0 * s.mu1 + s.lambda_minus * gm + s.lambda_plus * gp;
  s.chi = s.chi1 + s.chi2 * sqP;
  s.chi1_star = 2.0 * s.mu1 * (2.0 - ga) + P * (s.lambda_plus + s.lambda_minus - 2.0 * s.mu2);
  s.chi2_star = -2.0 * s.mu1 + 2.0 * s.mu2 * (2.0 - ga) + s.lambda_minus * gm + s.lambda_plus * gp;
  s.chi_star = s.chi1_star + s.chi2_star * sqP;
  s.Delta = s.chi / (e * e * e * e * P * P);

  s.f_z = (rp.z + rm.z) / e;
  s.f_w = (rp.w + rm.w) / e;
  s.f_zz = (rp.zz + rm.zz) / e;
  s.f_zw = (rp.zw + rm.zw) / e;
  s.f_ww = (rp.ww + rm.ww) / e;
  s.f_zzz = (rp.zzz + rm.zzz) / e;
  s.Delta1 = s.f_zz * s.f_ww - s.f_zw * s.f_zw;
  s.Delta2 = s.f_w * s.f_w * s.f_zz + s.f_z * s.f_z * s.f_ww - 2.0 * s.f_z * s.f_w * s.f_zw;

  const double q = 1.0 - s.f * s.f;
  const double denom = q * std::sqrt(q);
  Eigen::Matrix2d hf;
  hf << s.f_zz, s.f_zw, s.f_zw, s.f_ww;
  Eigen::Vector2d grad(s.f_z, s.f_w);
  s.hessian_closed = (q * hf + s.f * grad * grad.transpose()) / denom;
  // The stencil reaches 1.5 steps out (Richardson uses h and h/2); closer to the rim it is left NaN.
  if (LuneDomain{p}.contains(z, w, 1.5 * fd.step))
    s.hessian_fd = fd_hessian_G(p, z, w, fd);
  else
    s.hessian_fd.setConstant(std::numeric_limits<double>::quiet_NaN());
  s.g = q * s.f_zz + s.f * s.f_z * s.f_z;
  s.g_z = q * s.f_zzz + s.f_z * s.f_z * s.f_z;
  return s;
}

/// det H(G) from the closed form Δ. The (1 − f²) power was determined numerically:
/// det H(G) = Δ / (1 − f²)², since (1 − f²)Δ is the determinant of the quotient-rule
/// numerator (1 − f²)H(f) + f ∇f ∇fᵀ, which is divided by (1 − f²)^{3/2} per entry.
inline double det_hessian_closed(const AppendixSample& s) {
  const double q = 1.0 - s.f * s.f;
  return s.Delta / (q * q);
}

// ---------------------------------------------------------------------------------------------
// Sampling

/// Quasi-random points of the lune at least `margin` from its boundary (Sobol points of the
/// bounding box, rejected outside). Empty when the lune is thinner than the margin.
inline std::vector<std::pair<double, double>> sample_lune(const QabParams& p, std::size_t count, double margin = 1e-6,
                                                          std::size_t max_draws_factor = 200) {
  const LuneDomain dom{p};
  std::vector<std::pair<double, double>> pts;
  if (dom.w_half_width() <= margin) return pts;
  SobolPlane sobol;
  for (std::size_t draws = 0; pts.size() < count && draws < count * max_draws_factor; ++draws) {
    const auto [u, v] = sobol.next();
    const auto [z, w] = dom.from_unit_square(u, v);
    if (dom.contains(z, w, margin)) pts.emplace_back(z, w);
  }
  return pts;
}

struct ParamSample {
  QabParams params;
  double z, w;
};

struct ParamRange {
  double b_min = 0.02, b_max = 0.98;
  double delta_min = 0.01, delta_max = 4.0;
  double margin = 1e-6;
};

/// Quasi-random (b, e, z, w): b and δ from the first two Sobol coordinates (δ log-uniform),
/// e = sqrt(δ + 4 − 4b²), and (z, w) from the last two, rejected outside the lune.
inline std::vector<ParamSample> sample_params(std::size_t count, const ParamRange& r = {}) {
  boost::random::sobol engine(4);
  engine.discard(4);
  auto unit = [&] { return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53; };
  std::vector<ParamSample> out;
  for (std::size_t draws = 0; out.size() < count && draws < count * 200; ++draws) {
    const double u1 = unit(), u2 = unit(), u3 = unit(), u4 = unit();
    const double b = r.b_min + (r.b_max - r.b_min) * u1;
    const double delta = std::exp(std::log(r.delta_min) + (std::log(r.delta_max) - std::log(r.delta_min)) * u2);
    const QabParams p(b, std::sqrt(delta + 4.0 - 4.0 * b * b));
    const LuneDomain dom{p};
    const auto [z, w] = dom.from_unit_square(u3, u4);
    if (dom.contains(z, w, r.margin)) out.push_back({p, z, w});
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Identity and sign checks

struct IdentityViolation {
  std::string name;
  double b, e, z, w;
  double lhs, rhs, rel_error;
};

struct IdentityReport {
  std::size_t samples = 0;
  std::map<std::string, double> max_rel_error;  // per identity
  std::vector<IdentityViolation> violations;    // identities off by more than the tolerance
  std::vector<IdentityViolation> sign_violations;
  bool domain_empty = false;

  bool passed() const { return violations.empty() && sign_violations.empty() && !domain_empty; }
};

/// Relative tolerance by conditioning: 1e-9 when δ > 0.01, else 1e-7.
inline double identity_tolerance(const QabParams& p) { return p.delta() > 0.01 ? 1e-9 : 1e-7; }

namespace detail {

/// |lhs − rhs| relative to the magnitude of the terms that were combined (so an identity
/// whose sides cancel to ~0 is judged against the size of what cancelled).
inline double rel_error(double lhs, double rhs, double magnitude) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), magnitude, 1e-300});
  return std::abs(lhs - rhs) / scale;
}

}  // namespace detail

/// Checks the algebraic identities and sign claims of the concavity proof at one sample.
inline void check_sample_identities(const QabParams& p, const AppendixSample& s, double tol, IdentityReport& rep) {
  const double b = p.b, e = p.e, z = s.z, w = s.w;
  const double sqP = std::sqrt(s.P);
  auto check = [&](const std::string& name, double lhs, double rhs, double magnitude) {
    const double r = detail::rel_error(lhs, rhs, magnitude);
    auto& m = rep.max_rel_error[name];
    m = std::max(m, r);
    if (!(r <= tol)) rep.violations.push_back({name, b, e, z, w, lhs, rhs, r});
  };
  auto sign = [&](const std::string& name, double value, bool ok) {
    if (!ok) rep.sign_violations.push_back({name, b, e, z, w, value, 0.0, 0.0});
  };

  // The five identities of the proof chain.
  check("S + 4 - 2gamma = 4 - 4b^2", s.S + 4.0 - 2.0 * s.gamma, 4.0 - 4.0 * b * b, s.S + 4.0 + 2.0 * s.gamma);
  {
    const double rhs = (s.mu1 + s.mu2 * sqP) * p.delta() + s.chi_star;
    check("chi = (mu1 + mu2 sqrt P) delta + chi*", s.chi, rhs,
          std::abs((s.mu1 + s.mu2 * sqP) * p.delta()) + std::abs(s.chi_star) + std::abs(s.chi1) + std::abs(s.chi2 * sqP));
  }
  {
    const double rhs = (2.0 - s.gamma - sqP) * (s.theta1 + s.theta2 * s.gamma * sqP);
    check("chi* factorization", s.chi_star, rhs, std::abs(s.chi1_star) + std::abs(s.chi2_star * sqP));
  }
  check("(2 - gamma)^2 - P = 4(z^2(1 - b^2) + w^2)", (2.0 - s.gamma) * (2.0 - s.gamma) - s.P,
        4.0 * (z * z * (1.0 - b * b) + w * w), (2.0 - s.gamma) * (2.0 - s.gamma) + s.P);
  check("theta2 = 4(w^2 + z^2)", s.theta2, 4.0 * (w * w + z * z), 2.0 * (2.0 - s.gamma) + s.S);
  check("theta1 = 2(gamma+ - gamma-)^2 + P theta2", s.theta1,
        2.0 * (s.gamma_plus - s.gamma_minus) * (s.gamma_plus - s.gamma_minus) + s.P * s.theta2,
        2.0 * s.S * s.S + 4.0 * s.P + s.S * s.P + 2.0 * s.P * s.gamma);

  // Intermediate forms, checked against the analytic derivatives of f.
  check("mu1 = gamma-^2 + gamma+^2", s.mu1, s.gamma_minus * s.gamma_minus + s.gamma_plus * s.gamma_plus, s.S * s.S + 2.0 * s.P);
  check("chi1* = (2 - gamma) theta1 - P gamma theta2", s.chi1_star,
        (2.0 - s.gamma) * s.theta1 - s.P * s.gamma * s.theta2,
        std::abs((2.0 - s.gamma) * s.theta1) + std::abs(s.P * s.gamma * s.theta2));
  check("chi2* = -theta1 + gamma(2 - gamma) theta2", s.chi2_star, -s.theta1 + s.gamma * (2.0 - s.gamma) * s.theta2,
        std::abs(s.theta1) + std::abs(s.gamma * (2.0 - s.gamma) * s.theta2));
  {
    const double e2P2 = e * e * s.P * s.P;
    check("Delta1 = (mu1 + mu2 sqrt P)/(e^2 P^2)", s.Delta1, (s.mu1 + s.mu2 * sqP) / e2P2,
          std::abs(s.f_zz * s.f_ww) + s.f_zw * s.f_zw);
  }
  {
    const double rhs = (s.lambda_minus * std::sqrt(s.gamma_minus) + s.lambda_plus * std::sqrt(s.gamma_plus)) /
                       (e * e * e * s.P * sqP);
    check("Delta2 = (lambda- sqrt gamma- + lambda+ sqrt gamma+)/(e^3 P^1.5)", s.Delta2, rhs,
          std::abs(s.f_w * s.f_w * s.f_zz) + std::abs(s.f_z * s.f_z * s.f_ww) + std::abs(2.0 * s.f_z * s.f_w * s.f_zw));
  }
  {
    const double q = 1.0 - s.f * s.f;
    check("Delta = (1 - f^2) Delta1 + f Delta2", s.Delta, q * s.Delta1 + s.f * s.Delta2,
          std::abs(q * s.Delta1) + std::abs(s.f * s.Delta2));
    const auto& H = s.hessian_closed;
    check("det H(G) = Delta/(1 - f^2)^2", H(0, 0) * H(1, 1) - H(0, 1) * H(0, 1), det_hessian_closed(s),
          std::abs(H(0, 0) * H(1, 1)) + H(0, 1) * H(0, 1));
  }

  // Sign claims.
  sign("mu1 > 0", s.mu1, s.mu1 > 0.0);
  sign("mu2 > 0", s.mu2, s.mu2 > 0.0);
  sign("theta1 >= 0", s.theta1, s.theta1 >= 0.0);
  sign("theta2 >= 0", s.theta2, s.theta2 >= 0.0);
  sign("chi* >= 0", s.chi_star, s.chi_star >= -tol * (std::abs(s.chi1_star) + std::abs(s.chi2_star * sqP)));
  sign("chi > 0", s.chi, s.chi > 0.0);
  sign("2 - gamma - sqrt P >= 0", 2.0 - s.gamma - sqP, 2.0 - s.gamma - sqP >= -tol * (2.0 + s.gamma + sqP));
  sign("G_zz < 0 (closed form)", s.hessian_closed(0, 0), s.hessian_closed(0, 0) < 0.0);
  sign("det H(G) > 0 (closed form)", det_hessian_closed(s), det_hessian_closed(s) > 0.0);
}

/// λ₋(z, 0) = λ₊(z, 0) = 4z²(z² − 1) along the w = 0 slice.
inline void check_w0_slice(const QabParams& p, std::size_t samples, double tol, IdentityReport& rep) {
  const double zmax = std::sqrt(1.0 - p.b * p.b);
  for (std::size_t k = 0; k < samples; ++k) {
    const double z = zmax * (static_cast<double>(k) + 0.5) / static_cast<double>(samples) * (1.0 - 1e-6);
    if (!LuneDomain{p}.contains(z, 0.0, 1e-9)) continue;
    const auto s = eval_sample(p, z, 0.0, {}, 1e-9);
    const double rhs = 4.0 * z * z * (z * z - 1.0);
    for (auto [name, lam] : {std::pair{"lambda-(z,0) = 4z^2(z^2-1)", s.lambda_minus}, std::pair{"lambda+(z,0) = 4z^2(z^2-1)", s.lambda_plus}}) {
      const double r = detail::rel_error(lam, rhs, s.gamma * (2.0 + s.gamma) + 2.0 * s.S + s.P);
      auto& m = rep.max_rel_error[name];
      m = std::max(m, r);
      if (!(r <= tol)) rep.violations.push_back({name, p.b, p.e, z, 0.0, lam, rhs, r});
    }
  }
}

/// Identity and sign checks at `samples` quasi-random points of the lune for fixed (b, e).
inline IdentityReport check_identities(const QabParams& p, std::size_t samples, std::optional<double> tol = {},
                                       double margin = 1e-6) {
  IdentityReport rep;
  const double t = tol.value_or(identity_tolerance(p));
  const auto pts = sample_lune(p, samples, margin);
  if (pts.empty()) {
    rep.domain_empty = true;
    return rep;
  }
  for (const auto& [z, w] : pts) {
    check_sample_identities(p, eval_sample(p, z, w, {}, margin), t, rep);
    ++rep.samples;
  }
  check_w0_slice(p, 64, t, rep);
  return rep;
}

/// Same checks over quasi-random (b, e, z, w); the tolerance follows δ per sample.
inline IdentityReport check_identities_sweep(std::size_t samples, const ParamRange& range = {},
                                             std::optional<double> tol = {}) {
  IdentityReport rep;
  const auto pts = sample_params(samples, range);
  std::vector<IdentityReport> parts(pts.size());
  parallel_for(pts.size(), [&](std::size_t k) {
    const auto& s = pts[k];
    check_sample_identities(s.params, eval_sample(s.params, s.z, s.w, {}, range.margin),
                            tol.value_or(identity_tolerance(s.params)), parts[k]);
  });
  for (auto& part : parts) {
    ++rep.samples;
    for (auto& [name, m] : part.max_rel_error) rep.max_rel_error[name] = std::max(rep.max_rel_error[name], m);
    for (auto& v : part.violations) rep.violations.push_back(std::move(v));
    for (auto& v : part.sign_violations) rep.sign_violations.push_back(std::move(v));
  }
  if (pts.empty()) rep.domain_empty = true;
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Concavity by finite differences

struct ConcavityReport {
  std::size_t samples = 0;
  std::size_t gzz_violations = 0;        // finite-difference G_zz ≥ 0
  std::size_t det_violations = 0;        // finite-difference det H(G) ≤ 0
  std::size_t sign_disagreements = 0;    // closed-form g or Δ sign differs from finite differences
  double max_hessian_rel_error = 0.0;    // max-norm of (fd − closed) over max-norm of closed
  std::size_t hessian_mismatches = 0;    // rel error above hessian_tol
  std::size_t slice_samples = 0;
  std::size_t slice_violations = 0;      // w = 0: g_z ≥ 0 or g not decreasing in z
  bool domain_empty = false;

  bool passed() const {
    return !domain_empty && gzz_violations == 0 && det_violations == 0 && sign_disagreements == 0 &&
           hessian_mismatches == 0 && slice_violations == 0;
  }
};

struct ConcavityOptions {
  FdOptions fd{};
  double margin = 0.01;        // distance from the lune boundary
  double hessian_tol = 1e-4;
  std::size_t slice_samples = 200;
};

inline double hessian_rel_error(const AppendixSample& s) {
  return (s.hessian_fd - s.hessian_closed).cwiseAbs().maxCoeff() / s.hessian_closed.cwiseAbs().maxCoeff();
}

inline void check_concavity_at(const AppendixSample& s, const ConcavityOptions& opt, ConcavityReport& rep) {
  const auto& H = s.hessian_fd;
  const double det_fd = H(0, 0) * H(1, 1) - H(0, 1) * H(0, 1);
  ++rep.samples;
  if (!(H(0, 0) < 0.0)) ++rep.gzz_violations;
  if (!(det_fd > 0.0)) ++rep.det_violations;
  if ((s.g < 0.0) != (H(0, 0) < 0.0) || (s.Delta > 0.0) != (det_fd > 0.0)) ++rep.sign_disagreements;
  const double r = hessian_rel_error(s);
  rep.max_hessian_rel_error = std::max(rep.max_hessian_rel_error, r);
  if (!(r <= opt.hessian_tol)) ++rep.hessian_mismatches;
}

/// Along w = 0, g_z < 0 for z > 0 and g decreases (checked on consecutive samples).
inline void check_w0_monotonicity(const QabParams& p, const ConcavityOptions& opt, ConcavityReport& rep) {
  const double zmax = std::sqrt(1.0 - p.b * p.b) - opt.margin;
  if (zmax <= 0.0) return;
  double prev_g = 0.0;
  for (std::size_t k = 0; k < opt.slice_samples; ++k) {
    const double z = zmax * static_cast<double>(k + 1) / static_cast<double>(opt.slice_samples);
    if (!LuneDomain{p}.contains(z, 0.0, opt.margin * 0.5)) break;
    const auto s = eval_sample(p, z, 0.0, opt.fd, opt.margin * 0.5);
    ++rep.slice_samples;
    if (!(s.g_z < 0.0)) ++rep.slice_violations;
    if (k > 0 && !(s.g < prev_g)) ++rep.slice_violations;
    prev_g = s.g;
  }
}

inline ConcavityReport check_concavity(const QabParams& p, std::size_t samples, const ConcavityOptions& opt = {}) {
  if (!(opt.fd.step >= 1e-6 && opt.fd.step <= 1e-4)) throw PreconditionError("check_concavity: fd_step must lie in [1e-6, 1e-4]");
  ConcavityReport rep;
  const auto pts = sample_lune(p, samples, opt.margin);
  if (pts.empty()) {
    rep.domain_empty = true;
    return rep;
  }
  for (const auto& [z, w] : pts) check_concavity_at(eval_sample(p, z, w, opt.fd, opt.margin), opt, rep);
  check_w0_monotonicity(p, opt, rep);
  return rep;
}

/// Concavity checks over quasi-random (b, e, z, w), with the lune margin of `opt`.
inline ConcavityReport check_concavity_sweep(std::size_t samples, ParamRange range = {}, const ConcavityOptions& opt = {}) {
  range.margin = opt.margin;
  const auto pts = sample_params(samples, range);
  std::vector<ConcavityReport> parts(pts.size());
  parallel_for(pts.size(), [&](std::size_t k) {
    check_concavity_at(eval_sample(pts[k].params, pts[k].z, pts[k].w, opt.fd, opt.margin), opt, parts[k]);
  });
  ConcavityReport rep;
  for (const auto& part : parts) {
    rep.samples += part.samples;
    rep.gzz_violations += part.gzz_violations;
    rep.det_violations += part.det_violations;
    rep.sign_disagreements += part.sign_disagreements;
    rep.hessian_mismatches += part.hessian_mismatches;
    rep.max_hessian_rel_error = std::max(rep.max_hessian_rel_error, part.max_hessian_rel_error);
  }
  if (pts.empty()) rep.domain_empty = true;
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Q_AB in an arbitrary frame

/// An orthonormal frame (O, x, y, z, w) of R⁴: columns of `axes` are the axis directions.
struct Frame4 {
  Vector origin;
  Matrix axes;

  static Frame4 standard() { return {Vector::Zero(4), Matrix::Identity(4, 4)}; }
  Vector coordinates(const Vector& p) const { return axes.transpose() * (p - origin); }
};

/// How the frame's (z, w, α) coordinates map to the normalized configuration:
/// (z̃, w̃) = rot · ((z, w) − mid) / r and α̃ = α − phi.
struct NormalForm {
  std::optional<QabParams> params;  // empty when the lune is empty or a single point
  double radius;
  Eigen::Vector2d mid;
  Eigen::Matrix2d rot;
  double phi;
  double e_xy;  // distance between the centers' xy-projections
  Vector a_frame, b_frame;

  Eigen::Vector2d to_normal(double z, double w) const { return rot * (Eigen::Vector2d(z, w) - mid) / radius; }
  Eigen::Vector2d from_normal(double zt, double wt) const { return mid + radius * rot.transpose() * Eigen::Vector2d(zt, wt); }
};

/// Normalizes two disjoint congruent 4-balls, seen in `frame`, to unit balls centered at
/// (0, 0, 0, −b) and (e, 0, 0, b): translate in xy (no effect on Q), rotate xy (shifts α),
/// translate and rotate in zw, and scale by 1/r (affine maps of Q).
inline NormalForm reduce_to_normal_form(const Ball& a, const Ball& b, const Frame4& frame = Frame4::standard()) {
  if (a.dim() != 4 || b.dim() != 4) throw PreconditionError("reduce_to_normal_form: balls must live in R^4");
  if (std::abs(a.radius() - b.radius()) > 1e-12 * a.radius()) throw PreconditionError("reduce_to_normal_form: balls must be congruent");
  if (!((a.center() - b.center()).norm() > a.radius() + b.radius())) throw PreconditionError("reduce_to_normal_form: balls must be disjoint");
  NormalForm nf;
  nf.radius = a.radius();
  nf.a_frame = frame.coordinates(a.center());
  nf.b_frame = frame.coordinates(b.center());
  const Vector diff = nf.b_frame - nf.a_frame;
  nf.e_xy = std::hypot(diff[0], diff[1]);
  nf.phi = std::atan2(diff[1], diff[0]);
  nf.mid = Eigen::Vector2d(0.5 * (nf.a_frame[2] + nf.b_frame[2]), 0.5 * (nf.a_frame[3] + nf.b_frame[3]));
  const Eigen::Vector2d dzw(diff[2], diff[3]);
  const double len = dzw.norm();
  // Rotation taking dzw to (0, |dzw|): rows are the new z and w axes.
  Eigen::Vector2d wdir = len > 0.0 ? Eigen::Vector2d(dzw / len) : Eigen::Vector2d(0.0, 1.0);
  nf.rot << wdir[1], -wdir[0], wdir[0], wdir[1];
  const double bb = 0.5 * len / nf.radius;
  const double ee = nf.e_xy / nf.radius;
  if (bb < 1.0 && ee > 0.0 && ee * ee + 4.0 * bb * bb - 4.0 > 0.0) nf.params = QabParams(bb, ee);
  return nf;
}

/// Half-width of the α-interval of Q_AB at (z, w), computed directly in the frame:
/// the sections of the balls by H(z, w) are discs centered at the xy-projections of the
/// centers, and oriented lines meeting the first before the second make angles within
/// arcsin((R_A + R_B)/|Δxy|) of the direction of Δxy. Empty off the lune.
inline std::optional<double> direct_half_width(const Ball& a, const Ball& b, const Frame4& frame, double z, double w) {
  const Vector ca = frame.coordinates(a.center()), cb = frame.coordinates(b.center());
  const double ra2 = a.radius() * a.radius() - (z - ca[2]) * (z - ca[2]) - (w - ca[3]) * (w - ca[3]);
  const double rb2 = b.radius() * b.radius() - (z - cb[2]) * (z - cb[2]) - (w - cb[3]) * (w - cb[3]);
  if (!(ra2 > 0.0) || !(rb2 > 0.0)) return std::nullopt;
  const double exy = std::hypot(cb[0] - ca[0], cb[1] - ca[1]);
  const double ratio = (std::sqrt(ra2) + std::sqrt(rb2)) / exy;
  if (!(ratio < 1.0)) return std::nullopt;
  return std::asin(ratio);
}

struct QabViolation {
  double z1, w1, a1, z2, w2, a2;
  double excess;  // |α_mid − φ| − G(mid), or +inf when the midpoint leaves the lune
};

struct QabConvexityReport {
  std::size_t trials = 0;
  std::vector<QabViolation> violations;
  double max_excess = -std::numeric_limits<double>::infinity();
  double max_frame_mismatch = 0.0;  // |direct half-width − normalized G| over sampled points
  bool congruent = true;
  bool degenerate = false;          // lune empty or a point
};

struct QabOptions {
  double tol = 1e-8;
  double margin = 1e-9;  // sampled (z, w) stay this far inside the lune (normalized units)
  std::uint64_t seed = 0x9ab;
};

/// Midpoint test of the convexity of Q_AB in the given frame.
///
/// Points of Q are drawn as (z, w) uniformly in the region where H(z, w) meets both balls
/// and α uniform in [φ − G, φ + G], or on the boundary α = φ ± G for half of them. For
/// congruent balls the direct half-width is also compared with eval_G after normalization.
/// Non-congruent inputs are allowed (the report marks them); nothing is asserted for them.
inline QabConvexityReport check_Qab_convexity(const Ball& a, const Ball& b, std::size_t trials,
                                              const Frame4& frame = Frame4::standard(), const QabOptions& opt = {}) {
  if (a.dim() != 4 || b.dim() != 4) throw PreconditionError("check_Qab_convexity: balls must live in R^4");
  if (!((a.center() - b.center()).norm() > a.radius() + b.radius())) throw PreconditionError("check_Qab_convexity: balls must be disjoint");
  QabConvexityReport rep;
  rep.congruent = std::abs(a.radius() - b.radius()) <= 1e-12 * a.radius();
  std::optional<NormalForm> nf;
  if (rep.congruent) {
    nf = reduce_to_normal_form(a, b, frame);
    if (!nf->params) {
      rep.degenerate = true;
      return rep;
    }
  }
  const Vector ca = frame.coordinates(a.center()), cb = frame.coordinates(b.center());
  const double phi = std::atan2(cb[1] - ca[1], cb[0] - ca[0]);
  // Bounding box of the (z, w)-region: the intersection of the two discs' boxes.
  const double zlo = std::max(ca[2] - a.radius(), cb[2] - b.radius()), zhi = std::min(ca[2] + a.radius(), cb[2] + b.radius());
  const double wlo = std::max(ca[3] - a.radius(), cb[3] - b.radius()), whi = std::min(ca[3] + a.radius(), cb[3] + b.radius());
  if (!(zlo < zhi && wlo < whi)) {
    rep.degenerate = true;
    return rep;
  }
  const double scale = std::min(a.radius(), b.radius());
  auto inside = [&](double z, double w) {
    const double da = a.radius() - std::hypot(z - ca[2], w - ca[3]);
    const double db = b.radius() - std::hypot(z - cb[2], w - cb[3]);
    return std::min(da, db) > opt.margin * scale;
  };

  Rng rng(opt.seed);
  struct QPoint {
    double z, w, alpha;
  };
  auto draw = [&]() -> std::optional<QPoint> {
    for (int attempt = 0; attempt < 100000; ++attempt) {
      const double z = uniform(rng, zlo, zhi), w = uniform(rng, wlo, whi);
      if (!inside(z, w)) continue;
      const auto hw = direct_half_width(a, b, frame, z, w);
      if (!hw) continue;
      const double u = uniform(rng, -1.0, 1.0);
      const double alpha = phi + *hw * (uniform(rng, 0.0, 1.0) < 0.5 ? (u < 0 ? -1.0 : 1.0) : u);
      return QPoint{z, w, alpha};
    }
    return std::nullopt;
  };

  for (std::size_t t = 0; t < trials; ++t) {
    const auto p1 = draw(), p2 = draw();
    if (!p1 || !p2) {
      rep.degenerate = true;
      break;
    }
    ++rep.trials;
    if (nf) {
      for (const auto& q : {*p1, *p2}) {
        const auto n = nf->to_normal(q.z, q.w);
        if (!LuneDomain{*nf->params}.contains(n[0], n[1])) continue;
        const double g = eval_G(*nf->params, n[0], n[1]);
        rep.max_frame_mismatch = std::max(rep.max_frame_mismatch, std::abs(*direct_half_width(a, b, frame, q.z, q.w) - g));
      }
    }
    const double zm = 0.5 * (p1->z + p2->z), wm = 0.5 * (p1->w + p2->w), am = 0.5 * (p1->alpha + p2->alpha);
    const auto hw = direct_half_width(a, b, frame, zm, wm);
    const double excess = hw ? std::abs(am - phi) - *hw : std::numeric_limits<double>::infinity();
    rep.max_excess = std::max(rep.max_excess, excess);
    if (excess > opt.tol) rep.violations.push_back({p1->z, p1->w, p1->alpha, p2->z, p2->w, p2->alpha, excess});
  }
  return rep;
}

/// A random orthonormal frame of R⁴ with origin in [−2, 2]⁴.
inline Frame4 random_frame(Rng& rng) {
  Vector o(4);
  for (int k = 0; k < 4; ++k) o[k] = uniform(rng, -2.0, 2.0);
  return {o, random_rotation(rng, 4)};
}

}  // namespace translab
