#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "translab/geometry.hpp"

namespace translab {

/// What fit_line minimizes over lines ℓ.
enum class LineObjective {
  Gap,    // max_i (dist(c_i, ℓ) − r_i), the depth of ℓ
  Ratio,  // max_i dist(c_i, ℓ) / r_i, the smallest scale factor at which ℓ is a transversal
};

struct LineFitOptions {
  LineObjective objective = LineObjective::Gap;
  /// Unit normals o_j of the admissible direction cone {v : o_j · v > 0}; empty means unconstrained.
  std::vector<Vector> cone_normals;
  /// Stop as soon as the objective drops to this value (feasibility searches).
  double target = -std::numeric_limits<double>::infinity();
  double relative_gap = 1e-12;
  /// Initial level above the start's value, relative to the instance scale. The search
  /// explores roughly the sublevel set {objective ≤ start value + slack}, so a small slack
  /// keeps it in the start's basin at the price of more Newton steps.
  double start_slack = 0.05;
  int max_newton = 2000;
};

struct LineFitResult {
  OrientedLine line;
  double value;
  bool converged;
  int newton_steps;
};

/// max_i (dist(c_i, ℓ) − r_i): the depth of the best transversal candidate ℓ.
inline double line_depth(const BallFamily& f, const OrientedLine& l) {
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& b : f) v = std::max(v, line_ball_gap(l, b));
  return v;
}

/// max_i dist(c_i, ℓ) / r_i.
inline double line_ratio(const BallFamily& f, const OrientedLine& l) {
  double v = 0.0;
  for (const auto& b : f) v = std::max(v, distance_to_line(b.center(), l) / b.radius());
  return v;
}

inline double line_objective(const BallFamily& f, const OrientedLine& l, LineObjective obj) {
  return obj == LineObjective::Gap ? line_depth(f, l) : line_ratio(f, l);
}

/// Local minimizer of the objective over oriented lines whose direction stays in the cone.
///
/// Log-barrier method on (direction tilt u, foot shift y, level t) with the constraints
/// level_i(t)² > dist²(c_i, ℓ), where level_i = r_i + t (Gap) or r_i t (Ratio), and
/// o_j · v > 0. Each Newton step is taken in a chart centered at the current line:
/// v = (v₀ + Bu)/|v₀ + Bu|, q = q₀ + By with B a frame of v₀^⟂. dist² is concave along
/// some tilt-and-shift directions, so the Newton system uses |eigenvalues| (saddle-free
/// Newton) with a backtracking Armijo search that also tries longer steps.
///
/// Near degenerate minima (fewer active balls than line parameters) the centering rounds
/// can stall; the value is then typically accurate to ~1e-9 and `converged` is false.
inline LineFitResult fit_line(const BallFamily& f, const OrientedLine& start, const LineFitOptions& opt = {}) {
  const Eigen::Index d = family_dimension(f);
  if (start.dim() != d) throw PreconditionError("fit_line: start line dimension differs from family");
  const Eigen::Index m = d - 1;
  const Eigen::Index nv = 2 * m + 1;
  const auto nb = f.size();
  for (const auto& o : opt.cone_normals)
    if (!(o.dot(start.direction().vec()) > 0.0))
      throw PreconditionError("fit_line: start direction is outside the admissible cone");

  const bool ratio = opt.objective == LineObjective::Ratio;
  std::vector<double> lvl_off(nb), lvl_slope(nb);
  double scale = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    lvl_off[i] = ratio ? 0.0 : f[i].radius();
    lvl_slope[i] = ratio ? f[i].radius() : 1.0;
    scale = std::max(scale, f[i].radius());
  }
  if (ratio) scale = 1.0;

  OrientedLine line = start;
  // Start close to the central path near `start` (slack ≈ weight/τ) so the path stays in
  // the start's basin instead of drifting toward the far-away analytic center.
  const double slack = opt.start_slack * scale;
  const double start_value = line_objective(f, line, opt.objective);
  if (start_value <= opt.target) return {line, start_value, true, 0};
  double t = start_value + slack;

  const double barrier_weight = 2.0 * static_cast<double>(nb) + static_cast<double>(opt.cone_normals.size());
  double tau = barrier_weight / slack;
  const double gap_target = opt.relative_gap * scale;

  Matrix hess(nv, nv);
  Vector grad(nv), dg(nv);
  std::vector<double> g(nb), h(opt.cone_normals.size());
  std::vector<double> g_trial(nb), h_trial(opt.cone_normals.size());
  int steps = 0;
  bool converged = true;

  // Constraint values after moving the chart origin by `dir` scaled by `step`.
  auto evaluate_trial = [&](const Vector& v0, const Vector& q0, const Matrix& frame, const Vector& dir, double step,
                            double& t_out) {
    const Vector w = v0 + frame * (step * dir.head(m));
    const Vector q = q0 + frame * (step * dir.segment(m, m));
    const Vector v = w / w.norm();
    t_out = t + step * dir[nv - 1];
    for (std::size_t i = 0; i < nb; ++i) {
      const Vector a = f[i].center() - q;
      const double sa = a.dot(v);
      const double dist2 = std::max(0.0, a.squaredNorm() - sa * sa);
      const double level = lvl_off[i] + lvl_slope[i] * t_out;
      if (!(level > std::sqrt(dist2))) return false;
      g_trial[i] = level * level - dist2;
    }
    for (std::size_t j = 0; j < opt.cone_normals.size(); ++j) {
      h_trial[j] = opt.cone_normals[j].dot(v);
      if (!(h_trial[j] > 0.0)) return false;
    }
    return true;
  };

  bool done = false;
  while (!done) {
    bool centered = false;
    for (int it = 0; it < 120 && steps < opt.max_newton; ++it) {
      const Vector v0 = line.direction().vec();
      const Vector q0 = line.point();
      const Matrix frame = hyperplane_frame(v0);
      grad.setZero();
      hess.setZero();
      grad[nv - 1] = tau;
      for (std::size_t i = 0; i < nb; ++i) {
        const Vector a = f[i].center() - q0;
        const double s = a.dot(v0);
        const Vector alpha = frame.transpose() * a;
        const double level = lvl_off[i] + lvl_slope[i] * t;
        g[i] = level * level - alpha.squaredNorm();
        const double ig = 1.0 / g[i];
        // ∇g = (2 s α, 2 α, 2 level · slope)
        dg.head(m) = 2.0 * s * alpha;
        dg.segment(m, m) = 2.0 * alpha;
        dg[nv - 1] = 2.0 * level * lvl_slope[i];
        grad -= ig * dg;
        hess.noalias() += (ig * ig) * (dg * dg.transpose());
        // −∇²g / g with ∇²(dist²) blocks: uu = 2s²I − 2ααᵀ, yy = 2I, uy = 2sI.
        hess.topLeftCorner(m, m).diagonal().array() += ig * 2.0 * s * s;
        hess.topLeftCorner(m, m).noalias() -= (ig * 2.0) * (alpha * alpha.transpose());
        hess.block(m, m, m, m).diagonal().array() += ig * 2.0;
        hess.block(0, m, m, m).diagonal().array() += ig * 2.0 * s;
        hess.block(m, 0, m, m).diagonal().array() += ig * 2.0 * s;
        hess(nv - 1, nv - 1) -= ig * 2.0 * lvl_slope[i] * lvl_slope[i];
      }
      for (std::size_t j = 0; j < opt.cone_normals.size(); ++j) {
        h[j] = opt.cone_normals[j].dot(v0);
        const Vector beta = frame.transpose() * opt.cone_normals[j];
        grad.head(m) -= beta / h[j];
        hess.topLeftCorner(m, m).noalias() += (beta * beta.transpose()) / (h[j] * h[j]);
        hess.topLeftCorner(m, m).diagonal().array() += 1.0;
      }

      Eigen::SelfAdjointEigenSolver<Matrix> eig(hess);
      Vector lam = eig.eigenvalues().cwiseAbs();
      const double floor = std::max(lam.maxCoeff() * 1e-15, std::numeric_limits<double>::min());
      lam = lam.cwiseMax(floor);
      const Vector coeffs = eig.eigenvectors().transpose() * grad;
      const Vector dir = -(eig.eigenvectors() * coeffs.cwiseQuotient(lam));
      const double slope = grad.dot(dir);
      ++steps;
      if (!std::isfinite(slope)) {
        // Constraint values at round-off level; the current line is still valid.
        done = true;
        break;
      }
      if (-slope < 1e-14) {
        centered = true;
        break;
      }

      // Change in Φ for a trial step, summed term by term so τ·t does not cancel the logs.
      auto phi_change = [&](double step, double& t_new) -> std::optional<double> {
        if (!evaluate_trial(v0, q0, frame, dir, step, t_new)) return std::nullopt;
        double dphi = tau * (t_new - t);
        for (std::size_t k = 0; k < nb; ++k) dphi -= std::log(g_trial[k] / g[k]);
        for (std::size_t j = 0; j < h.size(); ++j) dphi -= std::log(h_trial[j] / h[j]);
        return dphi;
      };
      double step = 1.0, t_new = 0.0;
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
        const auto dphi = phi_change(step, t_new);
        if (dphi && *dphi <= 1e-4 * step * slope) {
          accepted = true;
          if (ls == 0) {
            // Along negative curvature the modified Newton step is too short; keep
            // doubling while Φ keeps dropping.
            double best = *dphi, t_try = 0.0;
            for (int grow = 0; grow < 30; ++grow) {
              const auto longer = phi_change(2.0 * step, t_try);
              if (!longer || !(*longer < best)) break;
              best = *longer;
              step *= 2.0;
              t_new = t_try;
            }
          }
          break;
        }
      }
      if (!accepted) {
        // Round-off floor: the model predicts progress the arithmetic cannot realize.
        centered = -slope < 1e-8;
        break;
      }
      line = canonicalize_line(q0 + frame * (step * dir.segment(m, m)), v0 + frame * (step * dir.head(m)));
      t = t_new;
      if (line_objective(f, line, opt.objective) <= opt.target) {
        done = centered = true;
        break;
      }
    }
    // Failing to center in the last rounds is round-off, not a wrong answer.
    if (!centered && barrier_weight / tau > 1e3 * gap_target) converged = false;
    if (barrier_weight / tau < gap_target || steps >= opt.max_newton) break;
    tau *= 10.0;
  }
  return {line, line_objective(f, line, opt.objective), converged, steps};
}

}  // namespace translab
