#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "translab/geometry.hpp"
#include "translab/one_center.hpp"

namespace translab {

enum class DepthClass { StrictInterior, Tangent, Infeasible };

inline const char* to_string(DepthClass c) {
  switch (c) {
    case DepthClass::StrictInterior: return "StrictInterior";
    case DepthClass::Tangent: return "Tangent";
    case DepthClass::Infeasible: return "Infeasible";
  }
  return "?";
}

inline DepthClass classify_depth(double value, double eps) {
  if (value < -eps) return DepthClass::StrictInterior;
  if (value > eps) return DepthClass::Infeasible;
  return DepthClass::Tangent;
}

/// Signed feasibility of a direction: negative iff the projected balls share interior points.
struct DepthResult {
  double value;
  Vector witness;  // minimizer in hyperplane_frame(v) coordinates
  DepthClass classification;
  double gap;      // solver's certified suboptimality bound
};

/// min over x ∈ v^⟂ of max_i (|x − P_v(c_i)| − r_i).
inline DepthResult depth(const BallFamily& f, const UnitDirection& v, double eps = Tolerance{}.feasibility) {
  const auto d = family_dimension(f);
  if (v.dim() != d) throw PreconditionError("depth: direction dimension differs from family");
  const Matrix frame = hyperplane_frame(v);
  Matrix projected(d - 1, static_cast<Eigen::Index>(f.size()));
  Vector radii(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) {
    projected.col(static_cast<Eigen::Index>(i)) = frame.transpose() * f[i].center();
    radii[static_cast<Eigen::Index>(i)] = f[i].radius();
  }
  auto sol = weighted_one_center(projected, radii);
  return {sol.value, std::move(sol.point), classify_depth(sol.value, eps), sol.gap};
}

/// The line with direction v through the depth witness.
inline OrientedLine witness_line(const UnitDirection& v, const Vector& witness) {
  return canonicalize_line(hyperplane_frame(v) * witness, v.vec());
}

/// Planar depth in closed form: for direction (cos θ, sin θ) the projections are intervals
/// on the normal, and depth is half the largest gap between an interval's lower end and
/// another interval's upper end (the i = j terms contribute −r_i).
inline double depth_2d_exact(const BallFamily& discs, double angle) {
  if (family_dimension(discs) != 2) throw PreconditionError("depth_2d_exact: discs must be planar");
  const double nx = -std::sin(angle), ny = std::cos(angle);
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (const auto& b : discs) {
    const double p = b.center()[0] * nx + b.center()[1] * ny;
    lower = std::max(lower, p - b.radius());
    upper = std::min(upper, p + b.radius());
  }
  return 0.5 * (lower - upper);
}

struct PlanarSweep {
  double min_depth;
  double angle;  // a minimizing angle in [0, π)
};

/// Exact minimum of depth_2d_exact over all directions.
///
/// depth(θ) is the upper envelope of h_ij(θ) = ((c_i − c_j)·n(θ) − r_i − r_j)/2, each of the
/// form A cos θ + B sin θ + C. The envelope's minimum sits at a stationary point of one h_ij
/// or at a crossing of two, so evaluating every such candidate angle is exact.
inline PlanarSweep min_depth_2d_exact(const BallFamily& discs) {
  if (family_dimension(discs) != 2) throw PreconditionError("min_depth_2d_exact: discs must be planar");
  struct Wave {
    double a, b, c;  // a cos θ + b sin θ + c
  };
  std::vector<Wave> waves;
  for (std::size_t i = 0; i < discs.size(); ++i) {
    for (std::size_t j = 0; j < discs.size(); ++j) {
      const Vector diff = discs[i].center() - discs[j].center();
      // (c_i − c_j) · (−sin θ, cos θ)
      waves.push_back({0.5 * diff[1], -0.5 * diff[0], -0.5 * (discs[i].radius() + discs[j].radius())});
    }
  }
  std::vector<double> candidates{0.0};
  auto add = [&](double th) {
    th = std::fmod(th, std::numbers::pi);
    if (th < 0) th += std::numbers::pi;
    candidates.push_back(th);
  };
  for (const auto& w : waves) {
    if (w.a != 0.0 || w.b != 0.0) {
      const double phi = std::atan2(w.b, w.a);
      add(phi);
      add(phi + std::numbers::pi);
    }
  }
  for (std::size_t p = 0; p < waves.size(); ++p) {
    for (std::size_t q = p + 1; q < waves.size(); ++q) {
      // (a_p − a_q) cos θ + (b_p − b_q) sin θ = c_q − c_p
      const double a = waves[p].a - waves[q].a, b = waves[p].b - waves[q].b, c = waves[q].c - waves[p].c;
      const double amp = std::hypot(a, b);
      if (amp == 0.0 || std::abs(c) > amp) continue;
      const double phi = std::atan2(b, a);
      const double delta = std::acos(std::clamp(c / amp, -1.0, 1.0));
      add(phi + delta);
      add(phi - delta);
    }
  }
  PlanarSweep best{std::numeric_limits<double>::infinity(), 0.0};
  for (double th : candidates) {
    const double v = depth_2d_exact(discs, th);
    if (v < best.min_depth) best = {v, th};
  }
  return best;
}

}  // namespace translab
