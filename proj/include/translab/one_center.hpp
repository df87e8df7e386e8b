#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "translab/common.hpp"

namespace translab {

struct OneCenterOptions {
  double relative_gap = 1e-12;  // stop when the certified gap drops below this times the instance scale
  int max_newton = 600;
};

struct OneCenterResult {
  Vector point;   // minimizer x
  double value;   // max_i (|x − p_i| − r_i) at `point`
  double gap;     // certified upper bound on value − optimum
  int newton_steps;
};

/// Additively weighted 1-center: min over x of max_i (|x − p_i| − r_i).
///
/// Solved as the second-order cone program min t s.t. |x − p_i| ≤ r_i + t with a
/// log barrier −log((r_i + t)² − |x − p_i|²) and Newton centering with backtracking.
/// `centers` holds one point per column.
inline OneCenterResult weighted_one_center(const Matrix& centers, const Vector& radii,
                                           const OneCenterOptions& opt = {}) {
  const Eigen::Index m = centers.rows();
  const Eigen::Index n = centers.cols();
  if (n < 1 || radii.size() != n) throw PreconditionError("one-center: need one radius per center");
  if (n == 1) return {centers.col(0), -radii[0], 0.0, 0};

  const Vector centroid = centers.rowwise().mean();
  double spread = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) spread = std::max(spread, (centers.col(i) - centroid).norm());
  const double scale = std::max({spread, radii.maxCoeff(), 1e-300});

  Vector x = centroid;
  double t = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) t = std::max(t, (x - centers.col(i)).norm() - radii[i]);
  t += scale;

  const Eigen::Index nv = m + 1;
  Matrix hess(nv, nv);
  Vector grad(nv), step(nv), y(m);
  const double barrier_weight = 2.0 * static_cast<double>(n);
  double tau = barrier_weight / scale;
  const double gap_target = opt.relative_gap * scale;
  int steps = 0;

  while (true) {
    // Near tangent configurations the constraint values are at round-off level and a round
    // may not center to 1e-14; it is cut short and the next round continues from there.
    for (int it = 0; it < 50; ++it) {
      grad.setZero();
      hess.setZero();
      grad[m] = tau;
      for (Eigen::Index i = 0; i < n; ++i) {
        y = x - centers.col(i);
        const double a = radii[i] + t;
        const double g = a * a - y.squaredNorm();
        const double ig = 1.0 / g;
        grad.head(m).noalias() += (2.0 * ig) * y;
        grad[m] -= 2.0 * a * ig;
        hess.topLeftCorner(m, m).noalias() += (4.0 * ig * ig) * (y * y.transpose());
        hess.topLeftCorner(m, m).diagonal().array() += 2.0 * ig;
        hess.col(m).head(m).noalias() -= (4.0 * a * ig * ig) * y;
        hess(m, m) += 4.0 * a * a * ig * ig - 2.0 * ig;
      }
      hess.row(m).head(m) = hess.col(m).head(m).transpose();
      step = hess.ldlt().solve(-grad);
      const double lambda2 = -grad.dot(step);
      ++steps;
      if (!std::isfinite(lambda2)) throw SolverIncident("one-center: non-finite Newton decrement", lambda2);
      if (lambda2 < 1e-14) break;
      // Backtracking on the barrier objective; the log differences are summed term by
      // term so that τ·t does not swamp them once τ is large.
      double alpha = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
        const Vector xn = x + alpha * step.head(m);
        const double tn = t + alpha * step[m];
        double dphi = tau * (tn - t);
        bool inside = true;
        for (Eigen::Index i = 0; i < n && inside; ++i) {
          const double a_old = radii[i] + t, a_new = radii[i] + tn;
          const double g_old = a_old * a_old - (x - centers.col(i)).squaredNorm();
          const double g_new = a_new * a_new - (xn - centers.col(i)).squaredNorm();
          if (!(a_new > 0.0) || !(g_new > 0.0)) inside = false;
          else dphi -= std::log(g_new / g_old);
        }
        if (inside && dphi <= -0.25 * alpha * lambda2) {
          x = xn;
          t = tn;
          moved = true;
          break;
        }
      }
      if (!moved || steps > opt.max_newton) break;
    }
    if (barrier_weight / tau < gap_target || steps > opt.max_newton) break;
    tau *= 16.0;
  }

  double value = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) value = std::max(value, (x - centers.col(i)).norm() - radii[i]);
  const double gap = barrier_weight / tau;
  if (steps > opt.max_newton && gap > 1e3 * gap_target) throw SolverIncident("one-center: Newton budget exhausted", gap);
  return {x, value, gap, steps};
}

}  // namespace translab
