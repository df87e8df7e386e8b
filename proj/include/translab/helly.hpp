#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <vector>

#include "translab/cone.hpp"
#include "translab/generators.hpp"
#include "translab/transversal.hpp"

namespace translab {

using IndexSet = std::vector<int>;

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

/// All k-subsets of {0..n−1} in lexicographic order; throws BudgetExceeded above `cap`.
inline std::vector<IndexSet> k_subsets(int n, int k, double cap = 1e5) {
  if (k < 0 || k > n) return {};
  if (binomial(n, k) > cap) throw BudgetExceeded("number of subsets exceeds the combinatorial budget");
  std::vector<IndexSet> out;
  IndexSet s(static_cast<std::size_t>(k));
  std::iota(s.begin(), s.end(), 0);
  for (;;) {
    out.push_back(s);
    int i = k - 1;
    while (i >= 0 && s[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++s[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

/// Representative of a permutation modulo reversal: the orientation whose first entry is smaller.
inline Permutation canonical_geometric(const Permutation& p) {
  if (p.size() >= 2 && p.front() > p.back()) return reversed_permutation(p);
  return p;
}

/// If p and q differ by swapping two adjacent entries, the swapped ball indices.
inline std::optional<std::pair<int, int>> adjacent_swap(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size()) return std::nullopt;
  std::vector<std::size_t> diff;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] != q[k]) diff.push_back(k);
  if (diff.size() == 2 && diff[1] == diff[0] + 1 && p[diff[0]] == q[diff[1]] && p[diff[1]] == q[diff[0]])
    return std::pair{p[diff[0]], p[diff[1]]};
  return std::nullopt;
}

/// Same as above, modulo reversal of either permutation.
inline std::optional<std::pair<int, int>> adjacent_swap_geometric(const Permutation& p, const Permutation& q) {
  if (auto s = adjacent_swap(p, q)) return s;
  return adjacent_swap(p, reversed_permutation(q));
}

/// Whether all centers lie on one line (relative tolerance on the second singular value).
inline bool centers_collinear(const BallFamily& f, double rel_tol = 1e-10) {
  if (f.size() <= 2) return true;
  const auto d = family_dimension(f);
  Vector mean = Vector::Zero(d);
  for (const auto& b : f) mean += b.center();
  mean /= static_cast<double>(f.size());
  Matrix m(d, static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = f[i].center() - mean;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  return s.size() < 2 || s[1] <= rel_tol * std::max(1.0, s[0]);
}

/// Line through the centers of a collinear family, oriented from the first to the last.
inline OrientedLine center_line(const BallFamily& f) {
  if (f.size() == 1) {
    Vector e = Vector::Zero(f[0].dim());
    e[0] = 1.0;
    return canonicalize_line(f[0].center(), e);
  }
  std::size_t far = 1;
  for (std::size_t i = 1; i < f.size(); ++i)
    if ((f[i].center() - f[0].center()).norm() > (f[far].center() - f[0].center()).norm()) far = i;
  return canonicalize_line(f[0].center(), f[far].center() - f[0].center());
}

// ---------------------------------------------------------------------------------------------
// Simultaneous shrinking

/// Singleton probing for critical configurations. Their lines are computed to depth ~1e-14,
/// and weakly pinned lines (nearly collinear centers) have depth slopes near 1e-3 per radian,
/// so the default ε = 1e-8 would report extents near 1e-5 that are tolerance, not geometry.
inline SingletonOptions critical_singleton_options() {
  SingletonOptions o;
  o.eps = 1e-10;
  return o;
}

struct ShrinkOptions {
  double check_offset = 1e-6;  // feasibility is re-checked at t* ± this
  int ratio_starts = 4;        // unordered mode: distinct geometric permutations fitted per subset
  double cap = 1e5;            // subset budget
  TransversalSearchOptions search{};
  SingletonOptions singleton = critical_singleton_options();
};

enum class ShrinkStatus { Critical, TrivialCollinear, NoCriticalT };

inline const char* to_string(ShrinkStatus s) {
  switch (s) {
    case ShrinkStatus::Critical: return "critical";
    case ShrinkStatus::TrivialCollinear: return "trivial-collinear";
    case ShrinkStatus::NoCriticalT: return "no-critical-t";
  }
  return "?";
}

struct SubsetShrink {
  IndexSet subset;
  double t;            // the subset keeps a transversal exactly for shrink parameters ≤ t
  OrientedLine line;   // its last transversal
};

struct ShrinkOutcome {
  ShrinkStatus status;
  double t_star;
  IndexSet critical_subset;
  std::optional<UnitDirection> critical_direction;
  std::optional<OrientedLine> unique_line;
  double cone_extent_at_t_star = 0.0;
  bool singleton = false;
  bool feasible_below = false;    // every k-subset has a transversal at t* − offset
  bool infeasible_above = false;  // the critical subset has none at t* + offset (search-based)
  double full_family_gap = 0.0;   // max_i dist(c_i, ℓ) − (1 − t*) r_i over the whole family
  std::vector<SubsetShrink> subsets;
};

namespace detail {

/// Smallest ratio max_i dist(c_i, ℓ)/r_i over lines ℓ that are transversals in the given mode.
/// The subset keeps a transversal while (1 − t) ≥ that ratio.
inline std::pair<double, OrientedLine> last_transversal(const BallSequence& sub, bool ordered,
                                                         const ShrinkOptions& opt) {
  auto sopt = opt.search;
  sopt.stop_at_first = ordered;
  const auto mode = ordered ? TransversalMode::order_respecting() : TransversalMode::unordered();
  const auto search = find_transversal(sub, mode, sopt);
  if (!search.found) throw PreconditionError("shrink_to_critical: a k-subset has no transversal before shrinking");

  std::vector<OrientedLine> starts{search.found->line};
  if (!ordered) {
    std::set<Permutation> seen;
    if (!search.found->induced_order.empty()) seen.insert(canonical_geometric(search.found->induced_order));
    for (const auto& o : search.outcomes) {
      if (static_cast<int>(starts.size()) >= opt.ratio_starts) break;
      if (o.value > sopt.eps) continue;
      const auto p = induced_order(sub.balls(), o.line.direction());
      if (p && seen.insert(canonical_geometric(*p)).second) starts.push_back(o.line);
    }
  }
  double best = std::numeric_limits<double>::infinity();
  std::optional<OrientedLine> best_line;
  for (const auto& s : starts) {
    LineFitOptions fit;
    fit.objective = LineObjective::Ratio;
    // Keep each fit inside the component of its own order.
    if (const auto p = induced_order(sub.balls(), s.direction())) fit.cone_normals = DirectionCone(BallSequence(sub.balls(), *p)).normals();
    const auto r = fit_line(sub.balls(), s, fit);
    if (r.value < best) best = r.value, best_line = r.line;
  }
  return {best, *best_line};
}

}  // namespace detail

/// Shrinks all radii by the factor (1 − t) and finds the first t at which some k-subset
/// loses its last (order-respecting) transversal.
///
/// Each subset's threshold is computed directly: it keeps a transversal exactly while
/// 1 − t ≥ min_ℓ max_i dist(c_i, ℓ)/r_i, so t* is the smallest threshold over subsets
/// and no bisection over t is needed. The answer is then re-checked at t* ± offset, and
/// the critical subset's cone is probed for being a single direction.
inline ShrinkOutcome shrink_to_critical(const BallSequence& seq, int k, bool ordered, const ShrinkOptions& opt = {}) {
  const int n = static_cast<int>(seq.size());
  if (k < 1) throw PreconditionError("shrink_to_critical: k must be positive");
  k = std::min(k, n);
  ShrinkOutcome out;
  if (centers_collinear(seq.balls())) {
    out.status = ShrinkStatus::TrivialCollinear;
    out.t_star = 1.0;
    OrientedLine l = center_line(seq.balls());
    if (ordered) {
      const auto p = induced_order(seq.balls(), l.direction());
      if (p && *p != seq.order()) l = l.reversed();
    }
    out.unique_line = l;
    out.critical_direction = l.direction();
    return out;
  }

  const auto subsets = k_subsets(n, k, opt.cap);
  out.subsets.resize(subsets.size(), SubsetShrink{{}, 0.0, center_line({seq.balls()[0]})});
  parallel_for(subsets.size(), [&](std::size_t s) {
    const auto sub = seq.restricted_to(subsets[s]);
    auto [ratio, line] = detail::last_transversal(sub, ordered, opt);
    out.subsets[s] = {subsets[s], 1.0 - ratio, line};
  });

  const auto crit = std::min_element(out.subsets.begin(), out.subsets.end(),
                                     [](const SubsetShrink& a, const SubsetShrink& b) { return a.t < b.t; });
  out.t_star = crit->t;
  if (!(out.t_star < 1.0 - 1e-12)) {
    out.status = ShrinkStatus::NoCriticalT;
    return out;
  }
  out.status = ShrinkStatus::Critical;
  out.critical_subset = crit->subset;
  out.unique_line = crit->line;
  out.critical_direction = crit->line.direction();

  const double factor = 1.0 - out.t_star;
  const auto critical = seq.restricted_to(crit->subset);
  // Below t*: each subset's own last transversal still works with radii scaled by (1 − t* + offset).
  out.feasible_below = std::all_of(out.subsets.begin(), out.subsets.end(), [&](const SubsetShrink& s) {
    return line_ratio(subfamily(seq.balls(), s.subset), s.line) <= factor + opt.check_offset;
  });
  {
    const auto above = critical.scaled(factor - opt.check_offset);
    auto sopt = opt.search;
    sopt.stop_at_first = true;
    out.infeasible_above = !find_transversal(above, ordered ? TransversalMode::order_respecting() : TransversalMode::unordered(), sopt).found;
  }
  {
    const auto at = critical.scaled(factor);
    const auto rep = detect_singleton_cone(at, *out.unique_line, opt.singleton);
    out.cone_extent_at_t_star = rep.angular_extent;
    out.singleton = rep.singleton;
  }
  out.full_family_gap = line_depth(scale_family(seq.balls(), factor), *out.unique_line);
  return out;
}

// ---------------------------------------------------------------------------------------------
// Pinning

struct PinningOptions {
  std::optional<int> max_size;  // default 2d − 1
  SingletonOptions singleton = critical_singleton_options();
};

/// The first subset (by size, then lexicographically) that still pins l, i.e. whose set of
/// transversal directions near l is a single direction. Empty if none up to max_size.
inline std::optional<IndexSet> pinning_witness(const BallSequence& seq, const OrientedLine& l,
                                               const PinningOptions& opt = {}) {
  if (!detect_singleton_cone(seq, l, opt.singleton).singleton)
    throw PreconditionError("pinning_witness: the line is not pinned by the family");
  const int n = static_cast<int>(seq.size());
  const int max_size = std::min(n, opt.max_size.value_or(2 * static_cast<int>(seq.dim()) - 1));
  // Only whether the extent exceeds the tolerance matters here, so rays stop just above it.
  SingletonOptions quick = opt.singleton;
  quick.max_extent = std::min(quick.max_extent, 4.0 * quick.angular_tolerance);
  for (int size = 1; size <= max_size; ++size) {
    const auto subsets = k_subsets(n, size);
    std::vector<char> pinned(subsets.size(), 0);
    parallel_for(subsets.size(), [&](std::size_t s) {
      const auto sub = seq.restricted_to(subsets[s]);
      if (depth(sub.balls(), l.direction(), quick.eps).value > quick.eps) return;
      pinned[s] = detect_singleton_cone(sub, l, quick).singleton;
    });
    for (std::size_t s = 0; s < subsets.size(); ++s)
      if (pinned[s]) return subsets[s];
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------------------------
// Geometric permutations

struct PermutationCatalog {
  std::vector<Permutation> orders;                   // canonical modulo reversal, in discovery order
  std::vector<UnitDirection> representatives;        // a transversal direction realizing each
  std::optional<std::pair<int, int>> adjacency_swap; // set when exactly two orders differ by one adjacent swap
  std::size_t directions_sampled = 0;
  std::size_t feasible_directions = 0;
};

struct PermutationOptions {
  int budget = 64;             // quasi-random seeds, on top of the pairwise center differences
  bool targeted_swaps = true;  // also search every adjacent swap of each permutation found
  int max_orders = 8;          // stop growing the catalog beyond this
  int swap_sphere_samples = 16;
  double eps = Tolerance{}.feasibility;
  std::uint64_t seed = 0x9e;
};

/// Samples transversal directions and collects the orders they induce, modulo reversal.
inline PermutationCatalog enumerate_geometric_permutations(const BallFamily& f, const PermutationOptions& opt = {}) {
  if (!is_pairwise_disjoint(f)) throw PreconditionError("enumerate_geometric_permutations: balls must be disjoint");
  const auto d = family_dimension(f);
  PermutationCatalog cat;
  std::map<Permutation, std::size_t> index;
  auto record = [&](const Permutation& p, const UnitDirection& v) {
    const auto c = canonical_geometric(p);
    if (index.count(c)) return false;
    index[c] = cat.orders.size();
    cat.orders.push_back(c);
    cat.representatives.push_back(v);
    return true;
  };

  std::vector<Vector> seeds;
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = a + 1; b < f.size(); ++b) seeds.push_back((f[b].center() - f[a].center()).normalized());
  {
    SobolSphere sobol(d);
    Rng rng(opt.seed);
    // A random rotation decorrelates the Sobol pattern from the coordinate axes.
    const Matrix rot = random_rotation(rng, d);
    for (int k = 0; k < opt.budget; ++k) seeds.push_back(rot * sobol.next());
  }
  double scale = 0.0;
  for (const auto& b : f) scale = std::max(scale, b.radius());
  LineFitOptions fit;
  fit.target = -1e-6 * scale;
  std::vector<std::optional<std::pair<Permutation, Vector>>> found(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t s) {
    const UnitDirection v(seeds[s]);
    const auto dep = depth(f, v, opt.eps);
    const auto fitted = fit_line(f, witness_line(v, dep.witness), fit);
    const auto& dir = fitted.line.direction();
    if (depth(f, dir, opt.eps).value > opt.eps) return;
    if (const auto p = induced_order(f, dir)) found[s] = std::pair{*p, dir.vec()};
  });
  cat.directions_sampled = seeds.size();
  for (auto& r : found)
    if (r) {
      ++cat.feasible_directions;
      record(r->first, UnitDirection(r->second));
    }

  if (opt.targeted_swaps) {
    TransversalSearchOptions sopt;
    sopt.sphere_samples = opt.swap_sphere_samples;
    sopt.eps = opt.eps;
    for (std::size_t i = 0; i < cat.orders.size() && static_cast<int>(cat.orders.size()) < opt.max_orders; ++i) {
      const Permutation base = cat.orders[i];
      std::vector<Permutation> candidates;
      for (std::size_t k = 0; k + 1 < base.size(); ++k) {
        Permutation q = base;
        std::swap(q[k], q[k + 1]);
        if (!index.count(canonical_geometric(q))) candidates.push_back(q);
      }
      std::vector<std::optional<Vector>> hits(candidates.size());
      parallel_for(candidates.size(), [&](std::size_t c) {
        const auto r = find_transversal(BallSequence(f, candidates[c]), TransversalMode::order_respecting(), sopt);
        if (r.found) hits[c] = r.found->line.direction().vec();
      });
      for (std::size_t c = 0; c < candidates.size(); ++c)
        if (hits[c]) record(candidates[c], UnitDirection(*hits[c]));
    }
  }
  if (cat.orders.size() == 2) cat.adjacency_swap = adjacent_swap_geometric(cat.orders[0], cat.orders[1]);
  return cat;
}

// ---------------------------------------------------------------------------------------------
// Helly-type checks

struct HellyReport {
  int k = 0;
  bool ordered = false;
  std::size_t subsets_checked = 0;
  bool premise = false;                // every k-subset has a (order-respecting) transversal
  std::optional<IndexSet> counterexample;
  double counterexample_depth = 0.0;   // best depth found for the counterexample subset
  bool conclusion_t = false;           // the full family has a transversal
  std::optional<bool> conclusion_ort;  // ordered mode: ... an order-respecting one
  bool conclusion = false;             // T in unordered mode, ORT in ordered mode
  bool theorem_applies = false;        // hypotheses of a Helly-type theorem hold for (family, k, mode)
  bool engine_defect = false;          // premise holds, theorem applies, conclusion fails
};

struct HellyOptions {
  double cap = 1e5;
  TransversalSearchOptions search{};
};

inline bool is_unit_disjoint(const BallFamily& f, double tol = 1e-12) {
  return is_pairwise_disjoint(f) &&
         std::all_of(f.begin(), f.end(), [&](const Ball& b) { return std::abs(b.radius() - f.front().radius()) <= tol * f.front().radius(); });
}

/// Checks the premise T(k) or ORT(k) over all k-subsets and the conclusion on the whole family.
///
/// Theorems checked: for pairwise-inflatable ordered families ORT(2d) ⇒ T and
/// ORT(2d+1) ⇒ ORT; for disjoint equal balls T(4d−1) ⇒ T.
inline HellyReport verify_helly_property(const BallSequence& seq, int k, bool ordered, const HellyOptions& opt = {}) {
  const int n = static_cast<int>(seq.size());
  const int d = static_cast<int>(seq.dim());
  if (k < 1) throw PreconditionError("verify_helly_property: k must be positive");
  HellyReport rep;
  rep.k = k;
  rep.ordered = ordered;
  const auto subsets = k_subsets(n, std::min(k, n), opt.cap);
  const auto mode = ordered ? TransversalMode::order_respecting() : TransversalMode::unordered();
  std::vector<std::optional<double>> failing(subsets.size());
  parallel_for(subsets.size(), [&](std::size_t s) {
    const auto r = find_transversal(seq.restricted_to(subsets[s]), mode, opt.search);
    if (!r.found) failing[s] = r.best_depth;
  });
  rep.subsets_checked = subsets.size();
  rep.premise = true;
  for (std::size_t s = 0; s < subsets.size(); ++s)
    if (failing[s]) {
      rep.premise = false;
      rep.counterexample = subsets[s];
      rep.counterexample_depth = *failing[s];
      break;
    }
  rep.conclusion_t = find_transversal(seq, TransversalMode::unordered(), opt.search).found.has_value();
  if (ordered) rep.conclusion_ort = find_transversal(seq, TransversalMode::order_respecting(), opt.search).found.has_value();
  rep.conclusion = ordered ? *rep.conclusion_ort : rep.conclusion_t;

  bool defect = false;
  if (ordered && is_pairwise_inflatable(seq.balls())) {
    if (k >= 2 * d) {
      rep.theorem_applies = true;
      defect = defect || !rep.conclusion_t;
    }
    if (k >= 2 * d + 1) defect = defect || !*rep.conclusion_ort;
  }
  if (!ordered && is_unit_disjoint(seq.balls()) && k >= 4 * d - 1) {
    rep.theorem_applies = true;
    defect = defect || !rep.conclusion_t;
  }
  if (k >= n) rep.theorem_applies = true;  // premise and conclusion coincide
  rep.engine_defect = rep.premise && rep.theorem_applies && defect;
  if (k >= n) rep.engine_defect = rep.premise != rep.conclusion;
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Pentagon of almost touching unit discs

/// Five unit discs centered on a regular pentagon with side 2 + epsilon.
inline BallFamily make_hadwiger_pentagon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw PreconditionError("pentagon epsilon must be positive");
  const double circumradius = (2.0 + epsilon) / (2.0 * std::sin(std::numbers::pi / 5));
  BallFamily f;
  for (int k = 0; k < 5; ++k) {
    const double a = std::numbers::pi / 2 + 2.0 * std::numbers::pi * k / 5;
    Vector c(2);
    c << circumradius * std::cos(a), circumradius * std::sin(a);
    f.emplace_back(c, 1.0);
  }
  return f;
}

struct PentagonCertificate {
  std::vector<double> quadruple_depths;  // exact minimum planar depth of each 4-subset (subset misses ball k)
  double full_depth;
  bool holds;                            // every quadruple has a transversal and the five do not
};

/// Exact certificate of the pentagon property by the planar sweep oracle.
inline PentagonCertificate certify_pentagon(const BallFamily& discs) {
  if (discs.size() != 5 || family_dimension(discs) != 2) throw PreconditionError("pentagon certificate needs 5 discs");
  PentagonCertificate c;
  for (int miss = 0; miss < 5; ++miss) {
    BallFamily four;
    for (int i = 0; i < 5; ++i)
      if (i != miss) four.push_back(discs[static_cast<std::size_t>(i)]);
    c.quadruple_depths.push_back(min_depth_2d_exact(four).min_depth);
  }
  c.full_depth = min_depth_2d_exact(discs).min_depth;
  c.holds = c.full_depth > 0.0 && std::all_of(c.quadruple_depths.begin(), c.quadruple_depths.end(), [](double v) { return v <= 0.0; });
  return c;
}

}  // namespace translab
