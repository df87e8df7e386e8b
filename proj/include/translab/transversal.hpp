#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "translab/centroid.hpp"
#include "translab/depth.hpp"
#include "translab/inflatability.hpp"
#include "translab/line_fit.hpp"
#include "translab/parallel.hpp"
#include "translab/sampling.hpp"

namespace translab {

/// order[k] is the index of the k-th ball of the sequence.
using Permutation = std::vector<int>;

inline bool is_permutation_of_size(const Permutation& p, std::size_t n) {
  if (p.size() != n) return false;
  std::vector<char> seen(n, 0);
  for (int k : p) {
    if (k < 0 || static_cast<std::size_t>(k) >= n || seen[static_cast<std::size_t>(k)]) return false;
    seen[static_cast<std::size_t>(k)] = 1;
  }
  return true;
}

inline Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

inline Permutation reversed_permutation(Permutation p) {
  std::reverse(p.begin(), p.end());
  return p;
}

/// A family of pairwise disjoint balls together with the order ≺ in which a transversal should meet them.
class BallSequence {
 public:
  BallSequence(BallFamily balls, Permutation order) : balls_(std::move(balls)), order_(std::move(order)) {
    if (balls_.empty()) throw PreconditionError("sequence must contain at least one ball");
    family_dimension(balls_);
    if (!is_permutation_of_size(order_, balls_.size())) throw PreconditionError("sequence order is not a permutation");
    if (!is_pairwise_disjoint(balls_)) throw PreconditionError("sequence balls must be pairwise disjoint");
  }
  explicit BallSequence(BallFamily balls) : BallSequence(balls, identity_permutation(balls.size())) {}

  const BallFamily& balls() const noexcept { return balls_; }
  const Permutation& order() const noexcept { return order_; }
  std::size_t size() const noexcept { return balls_.size(); }
  Eigen::Index dim() const noexcept { return balls_.front().dim(); }
  const Ball& at_rank(std::size_t k) const { return balls_[static_cast<std::size_t>(order_[k])]; }

  BallSequence reversed() const { return BallSequence(balls_, reversed_permutation(order_)); }

  /// The sub-sequence on the given ball indices, keeping the relative order.
  BallSequence restricted_to(const std::vector<int>& indices) const {
    std::vector<int> rank(balls_.size(), -1);
    for (std::size_t k = 0; k < order_.size(); ++k) rank[static_cast<std::size_t>(order_[k])] = static_cast<int>(k);
    std::vector<int> sorted = indices;
    std::sort(sorted.begin(), sorted.end(), [&](int a, int b) { return rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)]; });
    BallFamily sub;
    Permutation order(sorted.size());
    for (std::size_t k = 0; k < indices.size(); ++k) sub.push_back(balls_[static_cast<std::size_t>(indices[k])]);
    for (std::size_t k = 0; k < sorted.size(); ++k)
      order[k] = static_cast<int>(std::find(indices.begin(), indices.end(), sorted[k]) - indices.begin());
    return BallSequence(std::move(sub), std::move(order));
  }

  /// Same balls with every radius multiplied by `factor` (order kept).
  BallSequence scaled(double factor) const { return BallSequence(scale_family(balls_, factor), order_); }

 private:
  BallFamily balls_;
  Permutation order_;
};

/// U(F): the center differences c(Y) − c(X) for X ≺ Y. D_F is the set of directions with
/// positive dot product against all of them.
class DirectionCone {
 public:
  explicit DirectionCone(const BallSequence& seq) {
    for (std::size_t a = 0; a < seq.size(); ++a)
      for (std::size_t b = a + 1; b < seq.size(); ++b) {
        Vector u = seq.at_rank(b).center() - seq.at_rank(a).center();
        pair_vectors_.push_back(std::move(u));
      }
    // Consecutive differences generate the same cone (every other difference is their sum).
    for (std::size_t k = 0; k + 1 < seq.size(); ++k)
      normals_.push_back((seq.at_rank(k + 1).center() - seq.at_rank(k).center()).normalized());
  }

  const std::vector<Vector>& pair_vectors() const noexcept { return pair_vectors_; }
  /// Unit normals of a minimal description of D_F.
  const std::vector<Vector>& normals() const noexcept { return normals_; }

  bool contains(const Vector& v) const {
    return std::all_of(pair_vectors_.begin(), pair_vectors_.end(), [&](const Vector& u) { return v.dot(u) > 0.0; });
  }
  /// min_j o_j · v over the unit normals (positive inside D_F).
  double margin(const Vector& v) const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& o : normals_) m = std::min(m, o.dot(v));
    return m;
  }

 private:
  std::vector<Vector> pair_vectors_;
  std::vector<Vector> normals_;
};

inline bool in_direction_cone(const DirectionCone& dc, const UnitDirection& v) { return dc.contains(v.vec()); }

/// Ball indices sorted by c_i · v; empty when two keys are within `tol` (ambiguous order).
inline std::optional<Permutation> induced_order(const BallFamily& f, const UnitDirection& v,
                                                double tol = Tolerance{}.geometric) {
  std::vector<double> key(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) key[i] = f[i].center().dot(v.vec());
  Permutation p = identity_permutation(f.size());
  std::stable_sort(p.begin(), p.end(), [&](int a, int b) { return key[static_cast<std::size_t>(a)] < key[static_cast<std::size_t>(b)]; });
  for (std::size_t k = 0; k + 1 < p.size(); ++k)
    if (key[static_cast<std::size_t>(p[k + 1])] - key[static_cast<std::size_t>(p[k])] <= tol) return std::nullopt;
  return p;
}

/// Which transversals a search accepts.
class TransversalMode {
 public:
  enum class Kind { Unordered, OrderRespecting, CompatibleWith };

  static TransversalMode unordered() { return TransversalMode(Kind::Unordered, std::nullopt); }
  static TransversalMode order_respecting() { return TransversalMode(Kind::OrderRespecting, std::nullopt); }
  static TransversalMode compatible_with(BallSequence outer) { return TransversalMode(Kind::CompatibleWith, std::move(outer)); }

  Kind kind() const noexcept { return kind_; }
  const std::optional<BallSequence>& outer() const noexcept { return outer_; }

  /// The direction cone the mode imposes on `seq`, if any.
  std::optional<DirectionCone> cone(const BallSequence& seq) const {
    switch (kind_) {
      case Kind::Unordered: return std::nullopt;
      case Kind::OrderRespecting: return DirectionCone(seq);
      case Kind::CompatibleWith: return DirectionCone(*outer_);
    }
    return std::nullopt;
  }

 private:
  TransversalMode(Kind k, std::optional<BallSequence> outer) : kind_(k), outer_(std::move(outer)) {}
  Kind kind_;
  std::optional<BallSequence> outer_;
};

struct TransversalResult {
  OrientedLine line;
  DepthResult direction_depth;
  Permutation induced_order;
  bool order_respecting;
};

struct TransversalSearchOptions {
  int sphere_samples = 64;         // quasi-random seeds after the structured ones
  double eps = Tolerance{}.feasibility;
  bool stop_at_first = true;
  /// The fit stops once the line is this deep (relative to the largest radius); deeper
  /// lines survive small perturbations of the direction.
  double depth_goal = 1e-6;
  LineFitOptions fit{};
};

/// Outcome of one seed of the search.
struct SeedOutcome {
  Vector seed;
  OrientedLine line;
  double value;  // depth of the fitted direction
};

struct TransversalSearch {
  std::optional<TransversalResult> found;
  double best_depth;                  // smallest direction depth seen
  std::optional<OrientedLine> best_line;
  std::size_t seeds_tried = 0;
  bool inflatable_input = true;       // false: the search is best-effort (K(F) may be non-convex)
  std::vector<SeedOutcome> outcomes;  // per seed, in seed order
};

namespace detail {

/// Seeds: c_last − c_first, every pairwise center difference allowed by the cone, then
/// Sobol sphere points. Directions outside the cone are flipped when their negation is inside.
inline std::vector<Vector> transversal_seeds(const BallSequence& seq, const std::optional<DirectionCone>& cone,
                                             int sphere_samples) {
  std::vector<Vector> seeds;
  auto admit = [&](Vector v) {
    const double n = v.norm();
    if (!(n > 0.0)) return;
    v /= n;
    if (cone) {
      if (cone->margin(v) <= 0.0) {
        if (cone->margin(-v) > 0.0) v = -v;
        else return;
      }
    }
    seeds.push_back(std::move(v));
  };
  if (seq.size() >= 2) admit(seq.at_rank(seq.size() - 1).center() - seq.at_rank(0).center());
  for (std::size_t a = 0; a < seq.size(); ++a)
    for (std::size_t b = a + 1; b < seq.size(); ++b) admit(seq.at_rank(b).center() - seq.at_rank(a).center());
  if (cone) {
    // Sum of the unit normals points into the cone whenever it is non-empty and not too thin.
    Vector s = Vector::Zero(seq.dim());
    for (const auto& o : cone->normals()) s += o;
    admit(s);
  }
  if (seq.dim() >= 2) {
    SobolSphere sobol(seq.dim());
    for (int k = 0; k < sphere_samples; ++k) admit(sobol.next());
  }
  return seeds;
}

inline TransversalResult make_result(const BallSequence& seq, const UnitDirection& v, const DepthResult& dep,
                                     const TransversalMode& mode) {
  auto order = induced_order(seq.balls(), v);
  Permutation p = order ? *order : Permutation{};
  bool respects = order && *order == seq.order();
  OrientedLine line = witness_line(v, dep.witness);
  if (mode.kind() == TransversalMode::Kind::Unordered && order && !respects &&
      reversed_permutation(*order) == seq.order()) {
    // Orient the line along the sequence.
    line = line.reversed();
    p = seq.order();
    respects = true;
    return {line, depth(seq.balls(), line.direction()), p, respects};
  }
  return {line, dep, p, respects};
}

}  // namespace detail

/// Multi-start search for a line transversal in the given mode.
///
/// Each seed direction is refined by fit_line (with the mode's direction cone as a
/// constraint), and the fitted direction's depth is recomputed exactly. A result is
/// accepted when that depth is ≤ eps and the mode's constraints hold. Without a result
/// the search reports the smallest depth seen, which is evidence, not proof, of absence.
inline TransversalSearch find_transversal(const BallSequence& seq, const TransversalMode& mode,
                                          const TransversalSearchOptions& opt = {}) {
  const auto cone = mode.cone(seq);
  if (mode.kind() == TransversalMode::Kind::CompatibleWith && mode.outer()->dim() != seq.dim())
    throw PreconditionError("find_transversal: outer sequence dimension differs");
  const auto seeds = detail::transversal_seeds(seq, cone, opt.sphere_samples);

  double scale = 0.0;
  for (const auto& b : seq.balls()) scale = std::max(scale, b.radius());
  LineFitOptions fit = opt.fit;
  fit.objective = LineObjective::Gap;
  fit.target = -opt.depth_goal * scale;
  if (cone) fit.cone_normals = cone->normals();

  TransversalSearch out;
  out.best_depth = std::numeric_limits<double>::infinity();
  out.inflatable_input = is_pairwise_inflatable(seq.balls());

  auto run_seed = [&](const Vector& s) -> SeedOutcome {
    const UnitDirection v = UnitDirection::normalized(s);
    const auto dep = depth(seq.balls(), v, opt.eps);
    const auto fitted = fit_line(seq.balls(), witness_line(v, dep.witness), fit);
    const auto& dir = fitted.line.direction();
    const auto refined = depth(seq.balls(), dir, opt.eps);
    return {s, witness_line(dir, refined.witness), refined.value};
  };

  auto accept = [&](const SeedOutcome& o) {
    if (!(o.value <= opt.eps)) return false;
    if (cone && !cone->contains(o.line.direction().vec())) return false;
    return true;
  };

  // Batches of thread_budget() seeds; the first acceptable seed in seed order wins, so the
  // answer does not depend on the thread count.
  const std::size_t batch = opt.stop_at_first ? std::max<std::size_t>(1, thread_budget()) : seeds.size();
  for (std::size_t start = 0; start < seeds.size(); start += batch) {
    const std::size_t count = std::min(batch, seeds.size() - start);
    std::vector<std::optional<SeedOutcome>> results(count);
    parallel_for(count, [&](std::size_t k) { results[k] = run_seed(seeds[start + k]); });
    for (auto& r : results) {
      ++out.seeds_tried;
      if (r->value < out.best_depth) {
        out.best_depth = r->value;
        out.best_line = r->line;
      }
      if (!out.found && accept(*r)) {
        const auto dep = depth(seq.balls(), r->line.direction(), opt.eps);
        out.found = detail::make_result(seq, r->line.direction(), dep, mode);
      }
      out.outcomes.push_back(std::move(*r));
    }
    if (out.found && opt.stop_at_first) break;
  }
  return out;
}

/// The line with direction v through the center of mass of ∩P_v(F); through the unique
/// witness point when v is a tangent direction.
inline OrientedLine barycentric_transversal(const BallSequence& seq, const UnitDirection& v,
                                            double eps = Tolerance{}.feasibility,
                                            const CentroidOptions& copt = {}) {
  const auto dep = depth(seq.balls(), v, eps);
  if (dep.value > eps) throw PreconditionError("barycentric_transversal: direction admits no transversal");
  if (dep.classification == DepthClass::Tangent) return witness_line(v, dep.witness);
  const auto c = intersection_centroid(project_family(seq.balls(), v), copt);
  return witness_line(v, c ? *c : dep.witness);
}

}  // namespace translab
