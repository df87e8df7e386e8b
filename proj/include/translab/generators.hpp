#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "translab/inflatability.hpp"
#include "translab/sampling.hpp"

namespace translab {

enum class RadiusLaw { Unit, LogUniform };  // log-uniform in [0.3, 1]

inline double draw_radius(Rng& rng, RadiusLaw law) { return law == RadiusLaw::Unit ? 1.0 : log_uniform(rng, 0.3, 1.0); }

enum class FamilyKind { UnitDisjoint, PairwiseInflatable, ThinlyDistributed, NearLinePremise };

inline const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::UnitDisjoint: return "unit-disjoint";
    case FamilyKind::PairwiseInflatable: return "pairwise-inflatable";
    case FamilyKind::ThinlyDistributed: return "thinly-distributed";
    case FamilyKind::NearLinePremise: return "near-line-premise";
  }
  return "?";
}

namespace detail {

inline bool pair_ok(FamilyKind kind, const Ball& a, const Ball& b) {
  const double g2 = (a.center() - b.center()).squaredNorm();
  const double r1 = a.radius(), r2 = b.radius();
  switch (kind) {
    case FamilyKind::UnitDisjoint: return g2 > (r1 + r2) * (r1 + r2);
    case FamilyKind::ThinlyDistributed: return g2 > 4.0 * (r1 + r2) * (r1 + r2);
    default: return g2 > 2.0 * (r1 * r1 + r2 * r2);
  }
}

}  // namespace detail

/// Balls placed one at a time uniformly in a box of side 6·n^{1/d} (scaled up for thinly
/// distributed families), each candidate rejected if it breaks the pair condition.
inline BallFamily random_box_family(FamilyKind kind, int n, int d, Rng& rng, RadiusLaw law = RadiusLaw::LogUniform,
                                    long attempts_per_ball = 10000) {
  if (n < 1 || d < 2) throw PreconditionError("generator needs n ≥ 1 and d ≥ 2");
  if (kind == FamilyKind::UnitDisjoint) law = RadiusLaw::Unit;
  double side = 6.0 * std::pow(static_cast<double>(n), 1.0 / d);
  if (kind == FamilyKind::ThinlyDistributed) side *= 2.0;
  BallFamily f;
  for (int i = 0; i < n; ++i) {
    bool placed = false;
    for (long a = 0; a < attempts_per_ball && !placed; ++a) {
      Vector c(d);
      for (int k = 0; k < d; ++k) c[k] = uniform(rng, 0.0, side);
      Ball b(c, draw_radius(rng, law));
      placed = std::all_of(f.begin(), f.end(), [&](const Ball& o) { return detail::pair_ok(kind, b, o); });
      if (placed) f.push_back(std::move(b));
    }
    if (!placed) throw BudgetExceeded("rejection sampling budget exhausted");
  }
  return f;
}

struct NearLineOptions {
  RadiusLaw radii = RadiusLaw::LogUniform;
  double min_gap = 2.1;        // spacing along the line, in units of the largest radius
  double max_gap = 3.5;
  double offset_fraction = 0.95;  // perpendicular offset ≤ this times the ball's radius
  bool require_inflatable = true;
  long attempts = 100000;
};

/// Balls strung along a random line, each center within offset_fraction·r of it, so the
/// whole family has a transversal by construction (the line itself, in position order).
/// The returned family is sorted by position along the line.
inline BallFamily near_line_family(int n, int d, Rng& rng, const NearLineOptions& opt = {}) {
  if (n < 1 || d < 2) throw PreconditionError("generator needs n ≥ 1 and d ≥ 2");
  const Matrix rot = random_rotation(rng, d);
  Vector shift(d);
  for (int k = 0; k < d; ++k) shift[k] = uniform(rng, -2.0, 2.0);
  for (long a = 0; a < opt.attempts; ++a) {
    BallFamily f;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = draw_radius(rng, opt.radii);
      if (i > 0) s += uniform(rng, opt.min_gap, opt.max_gap);
      Vector off = random_unit_vector(rng, d);
      off[0] = 0.0;
      if (off.norm() < 1e-12) off[1] = 1.0;
      off.normalize();
      // Offsets biased toward the rim so shrinking loses transversals early.
      off *= r * opt.offset_fraction * std::sqrt(uniform(rng, 0.0, 1.0));
      off[0] = s;
      f.emplace_back(Vector(rot * off + shift), r);
    }
    const bool ok = opt.require_inflatable ? is_pairwise_inflatable(f) : is_pairwise_disjoint(f);
    if (ok) return f;
  }
  throw BudgetExceeded("rejection sampling budget exhausted");
}

inline BallFamily generate_family(FamilyKind kind, int n, int d, Rng& rng, RadiusLaw law = RadiusLaw::LogUniform) {
  if (kind == FamilyKind::NearLinePremise) {
    NearLineOptions opt;
    opt.radii = law;
    return near_line_family(n, d, rng, opt);
  }
  return random_box_family(kind, n, d, rng, law);
}

}  // namespace translab
