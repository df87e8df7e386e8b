// Desk-scale acceptance suite. Each check runs its full workload at the stated tolerances and
// prints one PASS/FAIL line with its measurements; a check also fails if it overruns its time
// budget. Exit status is the number of failed checks.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "translab/appendix.hpp"
#include "translab/cone.hpp"
#include "translab/helly.hpp"

using namespace translab;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

struct Check {
  std::string name;
  double time_limit;  // seconds
  std::function<Outcome()> run;
};

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(3) << x;
  return s.str();
}

Outcome pentagon_counterexample() {
  int certified = 0;
  std::ostringstream d;
  for (double eps : {0.005, 0.01, 0.02, 0.05}) {
    const auto c = certify_pentagon(make_hadwiger_pentagon(eps));
    const auto feasible = std::count_if(c.quadruple_depths.begin(), c.quadruple_depths.end(), [](double x) { return x <= 0.0; });
    d << "eps=" << eps << ": " << feasible << "/5 quadruples, full depth " << fmt(c.full_depth) << "; ";
    certified += c.holds;
  }
  return {certified == 4, d.str()};
}

Outcome inflation_round_trip() {
  Rng rng(1001);
  int failures = 0;
  double worst_radius = 0.0, worst_section = 0.0, min_margin = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 2 + trial % 5;
    const double r1 = log_uniform(rng, 0.3, 1.0);
    const double r2 = trial % 10 == 0 ? r1 : log_uniform(rng, 0.3, 1.0);
    const Vector c1 = random_unit_vector(rng, d) * uniform(rng, 0.0, 3.0);
    const double gap = std::sqrt(2.0 * (r1 * r1 + r2 * r2)) * uniform(rng, 1.001, 2.0);
    const Ball a(c1, r1), b(Vector(c1 + gap * random_unit_vector(rng, d)), r2);
    const auto res = inflate_pair(a, b);
    const auto back = slice_family({res.b1, res.b2}, base_hyperplane(d));
    const double dr = std::abs(res.b1.radius() - res.b2.radius());
    double ds = std::numeric_limits<double>::infinity();
    if (back.sections.size() == 2)
      ds = std::max({(back.sections[0].center() - a.center()).norm(), (back.sections[1].center() - b.center()).norm(),
                     std::abs(back.sections[0].radius() - a.radius()), std::abs(back.sections[1].radius() - b.radius())});
    worst_radius = std::max(worst_radius, dr);
    worst_section = std::max(worst_section, ds);
    min_margin = std::min(min_margin, res.disjointness_margin);
    if (!(dr <= 1e-10) || !(res.disjointness_margin > 0.0) || !(ds <= 1e-9)) ++failures;
  }
  return {failures == 0, "1000 pairs, max |r1-r2| " + fmt(worst_radius) + ", min margin " + fmt(min_margin) +
                             ", max section error " + fmt(worst_section) + ", failures " + std::to_string(failures)};
}

/// A pairwise-inflatable family whose centers lie within 0.9 r of a random hyperplane, which
/// therefore cuts every ball.
std::pair<BallFamily, AffineSubspace> family_near_hyperplane(Rng& rng, int n, int d) {
  const Vector normal = random_unit_vector(rng, d);
  const double offset = uniform(rng, -2.0, 2.0);
  const Matrix frame = hyperplane_frame(normal);
  const double side = 4.0 * std::pow(static_cast<double>(n), 1.0 / (d - 1));
  for (;;) {
    BallFamily f;
    for (int i = 0; i < n; ++i) {
      const double r = log_uniform(rng, 0.3, 1.0);
      Vector in(d - 1);
      for (int k = 0; k < d - 1; ++k) in[k] = uniform(rng, -side, side);
      f.emplace_back(Vector(frame * in + (offset + uniform(rng, -0.9, 0.9) * r) * normal), r);
    }
    if (is_pairwise_inflatable(f)) return {f, AffineSubspace::hyperplane(normal, offset)};
  }
}

Outcome slicing_closure() {
  Rng rng(1002);
  int failures = 0, cut_all = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto [f, h] = family_near_hyperplane(rng, 2 + trial % 5, 3 + trial % 4);
    const auto s = slice_family(f, h);
    if (!s.dropped.empty()) continue;
    ++cut_all;
    if (!is_pairwise_inflatable(s.sections)) ++failures;
  }
  return {failures == 0 && cut_all == 10000,
          std::to_string(cut_all) + " trials with every ball cut, " + std::to_string(failures) + " failures"};
}

Outcome cone_convexity() {
  Rng rng(1004);
  std::size_t midpoint = 0, strict = 0, pairs = 0, strict_checks = 0, insufficient = 0;
  double worst_gap = 0.0;
  for (int fam = 0; fam < 50; ++fam) {
    const int d = 3 + fam % 3, n = 2 + fam % 5;
    const BallSequence seq(near_line_family(n, d, rng));
    ConvexityOptions opt;
    opt.trials = 1000;
    opt.eps = 1e-8;
    opt.seed = 0xc0e + static_cast<std::uint64_t>(fam);
    const auto rep = verify_cone_convexity(seq, opt);
    midpoint += rep.midpoint_violations();
    strict += rep.strictness_violations();
    pairs += rep.pairs_tested;
    strict_checks += rep.strictness_checks;
    insufficient += rep.insufficient_directions;
    worst_gap = std::max(worst_gap, rep.max_boundary_gap);
  }
  return {midpoint == 0 && strict == 0 && insufficient == 0,
          "50 families, " + std::to_string(pairs) + " pairs, midpoint violations " + std::to_string(midpoint) +
              ", strictness violations " + std::to_string(strict) + " of " + std::to_string(strict_checks) +
              " checks, max boundary |depth| " + fmt(worst_gap)};
}

Outcome appendix_identities() {
  const auto ident = check_identities_sweep(10000);
  ConcavityOptions copt;
  copt.fd.step = 1e-5;
  const auto conc = check_concavity_sweep(10000, {}, copt);
  double worst = 0.0;
  for (const auto& [name, err] : ident.max_rel_error) worst = std::max(worst, err);
  return {ident.passed() && conc.passed() && conc.max_hessian_rel_error <= 1e-4,
          std::to_string(ident.samples) + " samples, worst identity rel error " + fmt(worst) + ", identity violations " +
              std::to_string(ident.violations.size()) + ", sign violations " + std::to_string(ident.sign_violations.size()) +
              "; " + std::to_string(conc.samples) + " FD samples: G_zz>=0 " + std::to_string(conc.gzz_violations) +
              ", det<=0 " + std::to_string(conc.det_violations) + ", sign disagreements " +
              std::to_string(conc.sign_disagreements) + ", max Hessian rel error " + fmt(conc.max_hessian_rel_error)};
}

Outcome qab_convexity() {
  Rng rng(1006);
  std::size_t violations = 0, trials = 0, degenerate = 0, redrawn = 0;
  double max_excess = -std::numeric_limits<double>::infinity(), mismatch = 0.0;
  for (int f = 0; f < 10; ++f) {
    // Congruent disjoint balls: zw-offset below 2r so the lune is non-empty, xy-offset large enough for disjointness.
    const double r = log_uniform(rng, 0.5, 2.0);
    const double b = uniform(rng, 0.05, 0.95);
    const double e = std::sqrt(4.0 - 4.0 * b * b + uniform(rng, 0.01, 4.0));
    const Matrix rot_zw = random_rotation(rng, 2);
    Vector ca(4), cb(4);
    ca << uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2);
    const double th = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    Eigen::Vector2d zw = rot_zw * Eigen::Vector2d(0.0, 2.0 * b * r);
    cb << ca[0] + e * r * std::cos(th), ca[1] + e * r * std::sin(th), ca[2] + zw[0], ca[3] + zw[1];
    // A frame mixing xy with zw can push the zw-separation past 2r, where Q_AB is empty; redraw those.
    const Ball ba(ca, r), bb(cb, r);
    Frame4 frame = random_frame(rng);
    while (!reduce_to_normal_form(ba, bb, frame).params) {
      frame = random_frame(rng);
      ++redrawn;
    }
    const auto rep = check_Qab_convexity(ba, bb, 10000, frame);
    violations += rep.violations.size();
    trials += rep.trials;
    degenerate += rep.degenerate;
    max_excess = std::max(max_excess, rep.max_excess);
    mismatch = std::max(mismatch, rep.max_frame_mismatch);
  }
  return {violations == 0 && degenerate == 0 && trials == 100000,
          "10 frames, " + std::to_string(trials) + " midpoint trials, violations " + std::to_string(violations) +
              ", max midpoint excess " + fmt(max_excess) + ", max frame-vs-normal-form mismatch " + fmt(mismatch) +
              ", frames redrawn for an empty Q_AB " + std::to_string(redrawn)};
}

Outcome shrink_mechanics() {
  Rng rng(1007);
  int failures = 0, incidents = 0;
  double worst_extent = 0.0, worst_gap = -std::numeric_limits<double>::infinity();
  for (int fam = 0; fam < 100; ++fam) {
    const BallSequence seq(near_line_family(7, 3, rng));
    try {
      const auto r = shrink_to_critical(seq, 6, true);
      const bool ok = r.status == ShrinkStatus::Critical && r.unique_line && r.cone_extent_at_t_star <= 1e-4 &&
                      r.full_family_gap <= 1e-6;
      worst_extent = std::max(worst_extent, r.cone_extent_at_t_star);
      worst_gap = std::max(worst_gap, r.full_family_gap);
      if (!ok) ++failures;
    } catch (const SolverIncident&) {
      ++incidents;
    }
  }
  return {failures == 0 && incidents == 0,
          "100 families (n=7, k=6), max cone extent " + fmt(worst_extent) + " rad, max distance to a ball " +
              fmt(std::max(0.0, worst_gap)) + ", failures " + std::to_string(failures) + ", solver incidents " +
              std::to_string(incidents)};
}

Outcome pinning_bound() {
  Rng rng(1008);
  int instances = 0, failures = 0;
  std::size_t largest = 0;
  for (int d : {2, 3}) {
    for (int k = 0; k < 20; ++k) {
      const int n = d + 2 + k % 4;
      const BallSequence seq(near_line_family(n, d, rng));
      const auto r = shrink_to_critical(seq, n, true);
      if (r.status != ShrinkStatus::Critical || !r.unique_line) continue;
      ++instances;
      const auto w = pinning_witness(seq.scaled(1.0 - r.t_star), *r.unique_line);
      if (!w || static_cast<int>(w->size()) > 2 * d - 1) ++failures;
      if (w) largest = std::max(largest, w->size());
    }
  }
  return {failures == 0 && instances > 0, std::to_string(instances) + " pinned instances (d=2,3), largest witness " +
                                              std::to_string(largest) + ", failures " + std::to_string(failures)};
}

Outcome geometric_permutations() {
  Rng rng(1009);
  int over = 0, not_adjacent = 0, with_two = 0;
  std::size_t most = 0;
  for (int fam = 0; fam < 50; ++fam) {
    NearLineOptions opt;
    opt.radii = RadiusLaw::Unit;
    opt.min_gap = 2.02;
    opt.max_gap = fam % 2 ? 2.6 : 3.5;
    opt.require_inflatable = false;
    const auto f = near_line_family(9 + fam % 4, 3, rng, opt);
    const auto cat = enumerate_geometric_permutations(f);
    most = std::max(most, cat.orders.size());
    if (cat.orders.size() > 2) ++over;
    if (cat.orders.size() == 2) {
      ++with_two;
      if (!cat.adjacency_swap) ++not_adjacent;
    }
  }
  return {over == 0 && not_adjacent == 0, "50 families (n=9..12), most orders " + std::to_string(most) + ", families with two " +
                                              std::to_string(with_two) + ", non-adjacent pairs " + std::to_string(not_adjacent)};
}

Outcome depth_cross_validation() {
  Rng rng(1010);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    BallFamily f;
    for (int i = 0, n = 2 + trial % 7; i < n; ++i) {
      Vector c(2);
      c << uniform(rng, -4, 4), uniform(rng, -4, 4);
      f.emplace_back(c, uniform(rng, 0.2, 2.0));
    }
    const double th = uniform(rng, 0, std::numbers::pi);
    Vector v(2);
    v << std::cos(th), std::sin(th);
    worst = std::max(worst, std::abs(depth(f, UnitDirection(v)).value - depth_2d_exact(f, th)));
  }
  return {worst <= 1e-8, "10000 planar instances, max |depth - exact| " + fmt(worst)};
}

}  // namespace

/// With arguments, runs only the checks with those numbers (1-based).
int main(int argc, char** argv) {
  const std::vector<Check> checks{
      {"pentagon: every 4 discs have a transversal, all 5 do not", 1.0, pentagon_counterexample},
      {"inflation round-trip of pairwise-inflatable pairs", 10.0, inflation_round_trip},
      {"hyperplane sections stay pairwise-inflatable", 30.0, slicing_closure},
      {"cone of directions is convex and strictly convex", 300.0, cone_convexity},
      {"lune identities, signs and Hessian agreement", 30.0, appendix_identities},
      {"Q_AB is convex in random frames", 120.0, qab_convexity},
      {"shrinking to the critical parameter pins a common line", 600.0, shrink_mechanics},
      {"pinned lines have witnesses of size at most 2d-1", 300.0, pinning_bound},
      {"unit balls have at most two geometric permutations", 300.0, geometric_permutations},
      {"depth solver matches the exact planar oracle", 10.0, depth_cross_validation},
  };
  std::cout << "threads: " << thread_budget() << "\n";
  int failed = 0;
  std::vector<std::size_t> selected;
  for (int a = 1; a < argc; ++a) {
    const long k = std::strtol(argv[a], nullptr, 10);
    if (k < 1 || k > static_cast<long>(checks.size())) {
      std::cerr << "usage: acceptance [check number ...] (1-" << checks.size() << ")\n";
      return 2;
    }
    selected.push_back(static_cast<std::size_t>(k - 1));
  }
  if (selected.empty())
    for (std::size_t k = 0; k < checks.size(); ++k) selected.push_back(k);
  for (std::size_t k : selected) {
    const auto& c = checks[k];
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.time_limit;
    const bool ok = o.passed && in_time;
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << "  [" << (k + 1) << "] " << c.name << "  (" << fmt(secs) << " s, limit "
              << c.time_limit << " s" << (in_time ? "" : ", OVER TIME") << ")\n      " << o.detail << std::endl;
  }
  std::cout << (selected.size() - static_cast<std::size_t>(failed)) << "/" << selected.size() << " acceptance checks passed\n";
  return failed;
}
