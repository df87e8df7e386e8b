#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "translab/geometry.hpp"

namespace translab {

/// Defining-inequality slack for one pair of balls.
struct PairMargin {
  int i;
  int j;
  double margin;
};

struct InflatabilityReport {
  bool holds = true;
  std::vector<PairMargin> margins;

  double min_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : margins) m = std::min(m, p.margin);
    return m;
  }
};

namespace detail {

template <class MarginFn>
InflatabilityReport pairwise_report(const BallFamily& f, MarginFn margin_of) {
  if (f.empty()) throw PreconditionError("inflatability needs at least one ball");
  family_dimension(f);
  InflatabilityReport report;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      const double gamma2 = (f[i].center() - f[j].center()).squaredNorm();
      const double m = margin_of(gamma2, f[i].radius(), f[j].radius());
      report.margins.push_back({static_cast<int>(i), static_cast<int>(j), m});
      if (!(m > 0.0)) report.holds = false;
    }
  }
  return report;
}

}  // namespace detail

/// γ² − 2(r₁² + r₂²) > 0 for every pair.
inline InflatabilityReport pairwise_inflatability(const BallFamily& f) {
  return detail::pairwise_report(
      f, [](double g2, double r1, double r2) { return g2 - 2.0 * (r1 * r1 + r2 * r2); });
}

inline bool is_pairwise_inflatable(const BallFamily& f) { return pairwise_inflatability(f).holds; }

/// γ² > 4(r₁ + r₂)² for every pair (Hadwiger's "thinly distributed").
inline InflatabilityReport thin_distribution(const BallFamily& f) {
  return detail::pairwise_report(
      f, [](double g2, double r1, double r2) { return g2 - 4.0 * (r1 + r2) * (r1 + r2); });
}

inline bool is_thinly_distributed(const BallFamily& f) { return thin_distribution(f).holds; }

/// γ > r₁ + r₂ for every pair.
inline bool is_pairwise_disjoint(const BallFamily& f) {
  return detail::pairwise_report(f,
                                 [](double g2, double r1, double r2) { return g2 - (r1 + r2) * (r1 + r2); })
      .holds;
}

struct SliceResult {
  BallFamily sections;
  std::vector<int> kept;     // input index of each section
  std::vector<int> dropped;  // balls whose interior misses the subspace
};

/// Sections of every ball by E, in E's coordinates. Balls missing E are dropped and reported.
inline SliceResult slice_family(const BallFamily& f, const AffineSubspace& e) {
  const auto d = family_dimension(f);
  if (e.ambient_dim() != d) throw PreconditionError("subspace and family dimensions differ");
  if (e.dim() >= d) throw PreconditionError("slicing subspace must have dimension < d");
  SliceResult out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (auto s = slice_ball(f[i], e)) {
      out.sections.push_back(std::move(*s));
      out.kept.push_back(static_cast<int>(i));
    } else {
      out.dropped.push_back(static_cast<int>(i));
    }
  }
  return out;
}

/// Two equal-radius disjoint balls in R^{d+1} whose sections by R^d × {0} are the inputs.
struct InflationResult {
  Ball b1;
  Ball b2;
  double sigma;  // δ₂ − δ₁; zero on the equal-radius branch
  double delta1;
  double delta2;
  double common_radius;
  double disjointness_margin;  // γ² − 4r²
  bool swapped;                // inputs were reordered so that ρ₁ ≥ ρ₂
  bool equal_radius_branch;    // symmetric lift used because ρ₁ = ρ₂
};

/// Lifts a pairwise-inflatable pair of d-balls to disjoint congruent (d+1)-balls.
///
/// With ρ₁ > ρ₂ the lift heights are δ₁ = (ρ₁² − ρ₂² − σ²)/(2σ) and δ₂ = δ₁ + σ for any
/// σ with σ² < min{Δ² − 2(ρ₁² + ρ₂²), ρ₁² − ρ₂²}; the default σ is half the square root
/// of that bound. Equal radii use the symmetric lift δ₁ = δ₂ = ¼√(Δ² − 2(ρ₁² + ρ₂²)).
/// The centers go to opposite sides of the original hyperplane, first ball on the negative side.
inline InflationResult inflate_pair(const Ball& b1p, const Ball& b2p, std::optional<double> sigma = std::nullopt) {
  if (b1p.dim() != b2p.dim()) throw PreconditionError("inflate_pair: dimension mismatch");
  const double delta2_centers = (b1p.center() - b2p.center()).squaredNorm();
  const double slack = delta2_centers - 2.0 * (b1p.radius() * b1p.radius() + b2p.radius() * b2p.radius());
  if (!(slack > 0.0)) throw PreconditionError("inflate_pair: pair is not pairwise-inflatable");

  const bool swapped = b1p.radius() < b2p.radius();
  const Ball& big = swapped ? b2p : b1p;
  const Ball& small = swapped ? b1p : b2p;
  const double rho1 = big.radius();
  const double rho2 = small.radius();
  const double radius_gap = (rho1 - rho2) * (rho1 + rho2);

  double s = 0.0, d1 = 0.0, d2 = 0.0;
  const bool equal_branch = !(radius_gap > 0.0);
  if (equal_branch) {
    if (sigma && *sigma != 0.0) throw PreconditionError("inflate_pair: sigma must be unset for equal radii");
    d1 = d2 = 0.25 * std::sqrt(slack);
  } else {
    const double bound = std::min(slack, radius_gap);
    if (sigma) {
      s = *sigma;
      if (!(s > 0.0) || !(s * s < bound)) throw PreconditionError("inflate_pair: sigma out of range");
    } else {
      s = 0.5 * std::sqrt(bound);
    }
    d1 = (radius_gap - s * s) / (2.0 * s);
    d2 = d1 + s;
  }

  const auto d = big.dim();
  auto lift = [d](const Vector& c, double h) {
    Vector out(d + 1);
    out.head(d) = c;
    out[d] = h;
    return out;
  };
  const double r1 = std::sqrt(d1 * d1 + rho1 * rho1);
  const double r2 = std::sqrt(d2 * d2 + rho2 * rho2);
  const double r = 0.5 * (r1 + r2);
  // Big ball goes below the hyperplane, small ball above.
  Ball lifted_big(lift(big.center(), -d1), r1);
  Ball lifted_small(lift(small.center(), d2), r2);
  const double gamma2 = (lifted_big.center() - lifted_small.center()).squaredNorm();
  const double margin = gamma2 - 4.0 * r * r;

  if (swapped) {
    return InflationResult{lifted_small, lifted_big, s, d1, d2, r, margin, true, equal_branch};
  }
  return InflationResult{lifted_big, lifted_small, s, d1, d2, r, margin, false, equal_branch};
}

/// The hyperplane R^d × {0} inside R^{d+1}, in which inflate_pair's inputs live.
inline AffineSubspace base_hyperplane(Eigen::Index d) {
  Matrix basis = Matrix::Zero(d + 1, d);
  basis.topRows(d) = Matrix::Identity(d, d);
  return AffineSubspace(Vector::Zero(d + 1), basis);
}

}  // namespace translab
