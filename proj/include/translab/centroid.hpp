#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "translab/geometry.hpp"
#include "translab/sampling.hpp"

namespace translab {

namespace detail {

struct Interval {
  double lo, hi;
};

// Intersects a set of disjoint arcs on [0, 2π) with the arc [center − half, center + half].
inline std::vector<Interval> clip_arcs(const std::vector<Interval>& arcs, double center, double half) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double lo = std::fmod(center - half, two_pi);
  if (lo < 0) lo += two_pi;
  std::vector<Interval> mask;
  if (lo + 2.0 * half <= two_pi) {
    mask.push_back({lo, lo + 2.0 * half});
  } else {
    mask.push_back({lo, two_pi});
    mask.push_back({0.0, lo + 2.0 * half - two_pi});
  }
  std::vector<Interval> out;
  for (const auto& a : arcs)
    for (const auto& b : mask) {
      const double l = std::max(a.lo, b.lo), h = std::min(a.hi, b.hi);
      if (h > l) out.push_back({l, h});
    }
  return out;
}

// Centroid of a planar intersection of discs by Green's theorem over its boundary arcs.
inline std::optional<Vector> planar_centroid(const BallFamily& discs) {
  double area2 = 0.0, mx = 0.0, my = 0.0;  // ∮x dy − y dx, ∮x² dy, ∮y² dx
  for (std::size_t i = 0; i < discs.size(); ++i) {
    const double a = discs[i].center()[0], b = discs[i].center()[1], r = discs[i].radius();
    std::vector<Interval> arcs{{0.0, 2.0 * std::numbers::pi}};
    bool skip = false;
    for (std::size_t j = 0; j < discs.size() && !arcs.empty(); ++j) {
      if (j == i) continue;
      const Vector diff = discs[j].center() - discs[i].center();
      const double dist = diff.norm();
      const double rj = discs[j].radius();
      if (dist + r <= rj) continue;  // circle i lies inside disc j
      if (dist == 0.0 && r == rj) {
        if (j < i) skip = true;  // identical discs: keep the first copy only
        continue;
      }
      if (dist >= r + rj) return std::nullopt;  // disjoint discs
      if (dist + rj <= r) {
        arcs.clear();  // disc j strictly inside disc i: circle i is outside disc j
        break;
      }
      const double c = std::clamp((dist * dist + r * r - rj * rj) / (2.0 * dist * r), -1.0, 1.0);
      arcs = clip_arcs(arcs, std::atan2(diff[1], diff[0]), std::acos(c));
    }
    if (skip) continue;
    for (const auto& arc : arcs) {
      const double p1 = arc.lo, p2 = arc.hi;
      const double s1 = std::sin(p1), s2 = std::sin(p2), c1 = std::cos(p1), c2 = std::cos(p2);
      area2 += a * r * (s2 - s1) - b * r * (c2 - c1) + r * r * (p2 - p1);
      // ∫ (a + r cos φ)² r cos φ dφ
      auto icos2 = [](double p) { return 0.5 * p + 0.25 * std::sin(2.0 * p); };
      auto icos3 = [](double p) { const double s = std::sin(p); return s - s * s * s / 3.0; };
      mx += r * (a * a * (s2 - s1) + 2.0 * a * r * (icos2(p2) - icos2(p1)) + r * r * (icos3(p2) - icos3(p1)));
      // ∫ (b + r sin φ)² (−r sin φ) dφ
      auto isin2 = [](double p) { return 0.5 * p - 0.25 * std::sin(2.0 * p); };
      auto isin3 = [](double p) { const double c = std::cos(p); return -c + c * c * c / 3.0; };
      my += -r * (b * b * (-(c2 - c1)) + 2.0 * b * r * (isin2(p2) - isin2(p1)) + r * r * (isin3(p2) - isin3(p1)));
    }
  }
  const double area = 0.5 * area2;
  if (!(area > 0.0)) return std::nullopt;
  Vector c(2);
  c << mx / (2.0 * area), -my / (2.0 * area);
  return c;
}

}  // namespace detail

struct CentroidOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 0x5eed;
};

/// Center of mass of the intersection of balls in R^m (all of the same dimension).
///
/// Exact for m = 1 (interval midpoint) and m = 2 (arc decomposition); stratified
/// Monte Carlo over the intersection's bounding box for m ≥ 3. Returns nothing when
/// the intersection has no interior the method can resolve.
inline std::optional<Vector> intersection_centroid(const BallFamily& balls, const CentroidOptions& opt = {}) {
  const auto m = family_dimension(balls);
  if (m == 1) {
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    for (const auto& b : balls) {
      lo = std::max(lo, b.center()[0] - b.radius());
      hi = std::min(hi, b.center()[0] + b.radius());
    }
    if (!(hi > lo)) return std::nullopt;
    return Vector::Constant(1, 0.5 * (lo + hi));
  }
  if (m == 2) return detail::planar_centroid(balls);

  Vector lo = Vector::Constant(m, -std::numeric_limits<double>::infinity());
  Vector hi = Vector::Constant(m, std::numeric_limits<double>::infinity());
  for (const auto& b : balls) {
    lo = lo.cwiseMax((b.center().array() - b.radius()).matrix());
    hi = hi.cwiseMin((b.center().array() + b.radius()).matrix());
  }
  if (((hi - lo).array() <= 0.0).any()) return std::nullopt;
  const auto per_axis = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(opt.samples), 1.0 / static_cast<double>(m)))));
  Rng rng(opt.seed);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  std::vector<std::size_t> cell(static_cast<std::size_t>(m), 0);
  Vector sum = Vector::Zero(m), x(m);
  std::size_t hits = 0;
  while (true) {
    for (Eigen::Index k = 0; k < m; ++k)
      x[k] = lo[k] + (hi[k] - lo[k]) * (static_cast<double>(cell[static_cast<std::size_t>(k)]) + jitter(rng)) /
                         static_cast<double>(per_axis);
    bool inside = true;
    for (const auto& b : balls)
      if ((x - b.center()).squaredNorm() > b.radius() * b.radius()) {
        inside = false;
        break;
      }
    if (inside) {
      sum += x;
      ++hits;
    }
    std::size_t k = 0;
    while (k < cell.size() && ++cell[k] == per_axis) cell[k++] = 0;
    if (k == cell.size()) break;
  }
  if (hits == 0) return std::nullopt;
  return Vector(sum / static_cast<double>(hits));
}

}  // namespace translab
