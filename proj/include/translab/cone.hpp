#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "translab/transversal.hpp"

namespace translab {

enum class ConeStatus { Interior, Boundary, Outside };

inline const char* to_string(ConeStatus s) {
  switch (s) {
    case ConeStatus::Interior: return "Interior";
    case ConeStatus::Boundary: return "Boundary";
    case ConeStatus::Outside: return "Outside";
  }
  return "?";
}

struct ConeClassification {
  ConeStatus status;
  double depth_value;
};

inline ConeClassification classify_direction(const BallSequence& seq, const UnitDirection& v,
                                             double eps = Tolerance{}.feasibility) {
  const double value = depth(seq.balls(), v, eps).value;
  const ConeStatus s = value < -eps ? ConeStatus::Interior : value > eps ? ConeStatus::Outside : ConeStatus::Boundary;
  return {s, value};
}

namespace detail {

/// Unit tangent at `base` pointing towards `target` (or an arbitrary one when they coincide).
inline Vector tangent_towards(const UnitDirection& base, const Vector& target) {
  Vector t = target - target.dot(base.vec()) * base.vec();
  if (t.norm() < 1e-14) t = hyperplane_frame(base).col(0);
  return t.normalized();
}

/// Largest θ ≤ cap with depth(exp_map(base, u, θ)) ≤ eps, assuming the feasible part of the
/// ray is an interval starting at θ = 0 (true for convex cones). Found by doubling from
/// `first` and then bisecting to relative precision 2^−bisect.
inline double ray_extent(const BallFamily& f, const UnitDirection& base, const Vector& u, double eps, double cap,
                         double first = 1e-10, int bisect = 40) {
  auto feasible = [&](double th) { return depth(f, exp_map(base, u, th), eps).value <= eps; };
  double lo = 0.0, hi = first;
  while (feasible(hi)) {
    lo = hi;
    if (hi >= cap) return cap;
    hi = std::min(2.0 * hi, cap);
  }
  for (int k = 0; k < bisect && hi - lo > 1e-15; ++k) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace detail

struct SingletonOptions {
  double angular_tolerance = 1e-5;
  double eps = Tolerance{}.feasibility;
  int rays = 32;            // quasi-random tangent directions
  int ascent_starts = 2;    // best rays refined by compass search
  double max_extent = std::numbers::pi / 2;
};

struct SingletonReport {
  bool singleton;
  double angular_extent;
  UnitDirection farthest;
};

/// Angular extent of the ε-feasible direction set around l's direction.
///
/// The extent is the largest geodesic distance from l.direction found by marching rays in
/// tangent directions (quasi-random plus the frame axes), then refining the best rays by
/// compass search over the ray's tangent. A thin sliver of feasible directions is missed by
/// sparse rays but found by the refinement, which follows the growth of the ray length.
inline SingletonReport detect_singleton_cone(const BallSequence& seq, const OrientedLine& l,
                                             const SingletonOptions& opt = {}) {
  const auto& f = seq.balls();
  const UnitDirection v0 = l.direction();
  if (v0.dim() != seq.dim()) throw PreconditionError("detect_singleton_cone: line dimension differs");
  if (depth(f, v0, opt.eps).value > opt.eps)
    throw PreconditionError("detect_singleton_cone: line direction admits no transversal");

  const Matrix frame = hyperplane_frame(v0);
  const Eigen::Index m = frame.cols();
  std::vector<Vector> tangents;  // coordinates in the frame
  for (Eigen::Index k = 0; k < m; ++k) {
    tangents.push_back(Vector::Unit(m, k));
    tangents.push_back(-Vector::Unit(m, k));
  }
  if (m >= 2) {
    SobolSphere sobol(m);
    for (int k = 0; k < opt.rays; ++k) tangents.push_back(sobol.next());
  }
  auto extent_of = [&](const Vector& coords) {
    return detail::ray_extent(f, v0, frame * coords.normalized(), opt.eps, opt.max_extent);
  };
  std::vector<double> ext(tangents.size());
  parallel_for(tangents.size(), [&](std::size_t k) { ext[k] = extent_of(tangents[k]); });

  std::vector<std::size_t> idx(tangents.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ext[a] > ext[b]; });

  double best = ext[idx[0]];
  Vector best_u = tangents[idx[0]].normalized();
  if (m >= 2 && best < opt.max_extent) {
    const auto starts = std::min<std::size_t>(static_cast<std::size_t>(opt.ascent_starts), idx.size());
    std::vector<std::pair<double, Vector>> refined(starts);
    parallel_for(starts, [&](std::size_t s) {
      Vector u = tangents[idx[s]].normalized();
      double e = ext[idx[s]];
      for (double h = 0.25; h > 1e-7 && e < opt.max_extent; ) {
        bool improved = false;
        for (Eigen::Index k = 0; k < m && !improved; ++k)
          for (double sign : {1.0, -1.0}) {
            Vector trial = (u + sign * h * Vector::Unit(m, k)).normalized();
            const double et = extent_of(trial);
            if (et > e) {
              e = et;
              u = trial;
              improved = true;
              break;
            }
          }
        if (!improved) h *= 0.5;
      }
      refined[s] = {e, u};
    });
    for (auto& [e, u] : refined)
      if (e > best) best = e, best_u = u;
  }
  return {best <= opt.angular_tolerance, best, exp_map(v0, frame * best_u, best)};
}

struct MidpointViolation {
  Vector v1, v2, point;
  double depth1, depth2, depth_point;
  bool strictness;  // false: the interior point is infeasible; true: feasible but not strictly
};

struct ConeReport {
  std::size_t samples_tested = 0;     // interior test points evaluated
  std::size_t pairs_tested = 0;
  std::size_t strictness_checks = 0;  // interior points between two distinct boundary endpoints
  std::size_t feasible_directions = 0;
  std::vector<MidpointViolation> violations;
  double max_boundary_gap = 0.0;      // max |depth| over boundary endpoints found by bisection
  bool inflatable_input = true;
  bool insufficient_directions = false;

  std::size_t midpoint_violations() const {
    return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(), [](const auto& v) { return !v.strictness; }));
  }
  std::size_t strictness_violations() const { return violations.size() - midpoint_violations(); }
};

struct ConvexityOptions {
  int trials = 1000;            // endpoint pairs
  int boundary_points = 96;     // endpoints bisected onto the depth-zero shell
  int interior_points = 32;     // endpoints strictly inside
  double eps = Tolerance{}.feasibility;
  /// Strictness is only checked for boundary endpoints at least this far apart; closer
  /// pairs have interior depth below ε and say nothing about strictness.
  double strict_min_angle = 1e-2;
  double march_step = 0.02;     // radians; rays are marched before bisecting
  std::uint64_t seed = 0xc0e;
};

namespace detail {

/// Walks from `base` along `u` in steps until the first infeasible direction, then bisects.
/// Returns the last feasible angle and whether the shell was reached before `cap`.
inline std::pair<double, bool> march_to_boundary(const BallFamily& f, const UnitDirection& base, const Vector& u,
                                                 double eps, double step, double cap) {
  auto value = [&](double th) { return depth(f, exp_map(base, u, th), eps).value; };
  double lo = 0.0, hi = 0.0;
  bool hit = false;
  for (double th = step; th <= cap; th += step) {
    if (value(th) > 0.0) {
      hi = th;
      hit = true;
      break;
    }
    lo = th;
  }
  if (!hit) return {lo, false};
  for (int k = 0; k < 60 && hi - lo > 1e-14; ++k) {
    const double mid = 0.5 * (lo + hi);
    (value(mid) <= 0.0 ? lo : hi) = mid;
  }
  return {lo, true};
}

}  // namespace detail

/// Geodesic-midpoint test of convexity of K(F), with strictness on boundary pairs.
///
/// A deep direction is found by an order-respecting search followed by a depth descent;
/// endpoints are then produced by marching random geodesics from it to the depth-zero shell
/// (boundary endpoints) or stopping part-way (interior endpoints). For each sampled pair the
/// depth is tested at the midpoint, the quartiles and one random fraction of the arc. On
/// non-inflatable inputs the same report is produced with inflatable_input = false.
inline ConeReport verify_cone_convexity(const BallSequence& seq, const ConvexityOptions& opt = {}) {
  ConeReport rep;
  const auto& f = seq.balls();
  rep.inflatable_input = is_pairwise_inflatable(f);
  const auto search = find_transversal(seq, TransversalMode::order_respecting());
  if (!search.found) {
    rep.insufficient_directions = true;
    return rep;
  }
  const DirectionCone cone(seq);
  UnitDirection center = search.found->line.direction();
  {
    LineFitOptions fit;
    fit.cone_normals = cone.normals();
    const auto deep = fit_line(f, search.found->line, fit);
    if (depth(f, deep.line.direction(), opt.eps).value <= depth(f, center, opt.eps).value) center = deep.line.direction();
  }

  Rng rng(opt.seed);
  struct Endpoint {
    UnitDirection v;
    double value;
    bool boundary;
  };
  const int total = opt.boundary_points + opt.interior_points;
  std::vector<Vector> rays(static_cast<std::size_t>(total));
  std::vector<double> fractions(static_cast<std::size_t>(total));
  for (int k = 0; k < total; ++k) {
    rays[static_cast<std::size_t>(k)] = detail::tangent_towards(center, random_unit_vector(rng, seq.dim()));
    fractions[static_cast<std::size_t>(k)] = uniform(rng, 0.1, 0.95);
  }
  std::vector<std::optional<Endpoint>> found(static_cast<std::size_t>(total));
  // Half a great circle would reach -center; K(F) lies in an open hemisphere around any
  // of its directions only for nonempty U(F), so the single-ball case is capped at π/2.
  const double cap = std::numbers::pi / 2 - 1e-3;
  parallel_for(static_cast<std::size_t>(total), [&](std::size_t k) {
    auto [theta, hit] = detail::march_to_boundary(f, center, rays[k], opt.eps, opt.march_step, cap);
    const bool boundary = static_cast<int>(k) < opt.boundary_points && hit;
    if (!boundary) theta *= fractions[k];
    const UnitDirection v = exp_map(center, rays[k], theta);
    if (!cone.contains(v.vec())) return;
    found[k] = Endpoint{v, depth(f, v, opt.eps).value, boundary};
  });
  std::vector<Endpoint> pts;
  pts.push_back({center, depth(f, center, opt.eps).value, false});
  for (auto& e : found)
    if (e) pts.push_back(*e);
  rep.feasible_directions = pts.size();
  for (const auto& p : pts)
    if (p.boundary) rep.max_boundary_gap = std::max(rep.max_boundary_gap, std::abs(p.value));
  if (pts.size() < 2) {
    rep.insufficient_directions = true;
    return rep;
  }

  struct PairPlan {
    std::size_t a, b;
    double s_random;
  };
  std::vector<PairPlan> plan(static_cast<std::size_t>(opt.trials));
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  for (auto& p : plan) {
    p.a = pick(rng);
    do p.b = pick(rng); while (p.b == p.a);
    p.s_random = uniform(rng, 0.0, 1.0);
  }
  struct PairOutcome {
    std::vector<MidpointViolation> violations;
    int tested = 0, strict_checks = 0;
  };
  std::vector<PairOutcome> outcomes(plan.size());
  parallel_for(plan.size(), [&](std::size_t k) {
    const auto& e1 = pts[plan[k].a];
    const auto& e2 = pts[plan[k].b];
    auto& out = outcomes[k];
    const double angle = geodesic_angle(e1.v, e2.v);
    if (angle < 1e-12) return;
    const bool strict = e1.boundary && e2.boundary && angle >= opt.strict_min_angle && rep.inflatable_input;
    for (double s : {0.5, 0.25, 0.75, plan[k].s_random}) {
      if (s <= 0.0 || s >= 1.0) continue;
      const UnitDirection m = slerp(e1.v, e2.v, s);
      const double dm = depth(f, m, opt.eps).value;
      ++out.tested;
      if (strict) ++out.strict_checks;
      if (dm > opt.eps)
        out.violations.push_back({e1.v.vec(), e2.v.vec(), m.vec(), e1.value, e2.value, dm, false});
      else if (strict && dm >= -opt.eps)
        out.violations.push_back({e1.v.vec(), e2.v.vec(), m.vec(), e1.value, e2.value, dm, true});
    }
  });
  for (auto& o : outcomes) {
    ++rep.pairs_tested;
    rep.samples_tested += static_cast<std::size_t>(o.tested);
    rep.strictness_checks += static_cast<std::size_t>(o.strict_checks);
    for (auto& v : o.violations) rep.violations.push_back(std::move(v));
  }
  return rep;
}

}  // namespace translab
