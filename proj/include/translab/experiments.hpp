#pragma once

#include <optional>
#include <string>
#include <vector>

#include "translab/appendix.hpp"
#include "translab/cone.hpp"
#include "translab/helly.hpp"
#include "translab/scenario.hpp"
#include "translab/svg.hpp"

// Dispatch from a validated scenario to the owning module. Each experiment returns a JSON
// payload (deterministic: no timings), a pass flag, CSV tables and SVG plots.

namespace translab {

struct RunOverrides {
  std::optional<double> tolerance;    // feasibility band, or the identity tolerance for verify-appendix
  std::optional<long long> budget;    // seeds, trials or samples, depending on the experiment
  std::optional<std::uint64_t> seed;
};

struct Plot {
  std::string name;
  std::string svg;
};

struct ExperimentResult {
  Json payload = Json::object();
  bool passed = false;
  std::vector<Table> tables;
  std::vector<Plot> plots;
};

namespace detail {

inline Json line_json(const OrientedLine& l) {
  return {{"point", vector_json(l.point())}, {"direction", vector_json(l.direction().vec())}};
}

inline OrientedLine line_from_json(const Json& j, int dim) {
  if (!j.contains("point") || !j.contains("direction")) throw ScenarioError("parameters.line", "needs point and direction");
  const Vector p = read_vector(j["point"], "parameters.line.point");
  const Vector v = read_vector(j["direction"], "parameters.line.direction");
  if (p.size() != dim || v.size() != dim) throw ScenarioError("parameters.line", "dimension differs from the scenario");
  if (!(v.norm() > 0.0)) throw ScenarioError("parameters.line.direction", "must be non-zero");
  return canonicalize_line(p, v);
}

inline std::vector<Table::Cell> vector_cells(const Vector& v) {
  std::vector<Table::Cell> c;
  for (Eigen::Index k = 0; k < v.size(); ++k) c.emplace_back(v[k]);
  return c;
}

inline std::vector<std::string> coord_header(const std::string& prefix, Eigen::Index d) {
  std::vector<std::string> h;
  for (Eigen::Index k = 0; k < d; ++k) h.push_back(prefix + std::to_string(k));
  return h;
}

inline long long count_param(const Scenario& s, const char* key, long long fallback, const RunOverrides& o) {
  return o.budget.value_or(param_or<long long>(s, key, fallback));
}

inline int require_k(const Scenario& s) {
  const auto it = s.parameters.find("k");
  if (it == s.parameters.end()) throw ScenarioError("parameters.k", std::string("required for experiment ") + to_string(s.experiment));
  const int k = it->get<int>();
  if (k < 1 || k > static_cast<int>(s.balls.size())) throw ScenarioError("parameters.k", "must lie in [1, n]");
  return k;
}

// ---------------------------------------------------------------------------------------------

inline ExperimentResult run_check_inflatable(const Scenario& s, const RunOverrides&) {
  ExperimentResult r;
  const auto inf = pairwise_inflatability(s.balls);
  const auto thin = thin_distribution(s.balls);
  r.payload = {{"n", s.balls.size()},
               {"dimension", s.dimension},
               {"pairwise_inflatable", inf.holds},
               {"min_inflatable_margin", inf.margins.empty() ? 0.0 : inf.min_margin()},
               {"thinly_distributed", thin.holds},
               {"unit_disjoint", is_unit_disjoint(s.balls)}};
  Table t{"pair_margins", {"i", "j", "inflatable_margin", "thin_margin"}, {}};
  for (std::size_t k = 0; k < inf.margins.size(); ++k)
    t.add({static_cast<long long>(inf.margins[k].i), static_cast<long long>(inf.margins[k].j), inf.margins[k].margin,
           thin.margins[k].margin});
  r.tables.push_back(std::move(t));
  r.passed = inf.holds;
  return r;
}

inline TransversalMode mode_from(const Scenario& s, const std::string& fallback) {
  const auto m = param_or<std::string>(s, "mode", fallback);
  if (m == "unordered") return TransversalMode::unordered();
  if (m == "ordered") return TransversalMode::order_respecting();
  throw ScenarioError("parameters.mode", "must be \"unordered\" or \"ordered\"");
}

inline ExperimentResult run_find_transversal(const Scenario& s, const RunOverrides& o) {
  ExperimentResult r;
  const auto seq = s.sequence();
  TransversalSearchOptions opt;
  opt.sphere_samples = static_cast<int>(count_param(s, "sphere_samples", opt.sphere_samples, o));
  opt.eps = o.tolerance.value_or(param_or<double>(s, "eps", opt.eps));
  opt.stop_at_first = false;
  const auto mode = mode_from(s, s.order ? "ordered" : "unordered");
  const auto res = find_transversal(seq, mode, opt);
  r.payload = {{"mode", mode.kind() == TransversalMode::Kind::Unordered ? "unordered" : "ordered"},
               {"found", res.found.has_value()},
               {"best_depth", res.best_depth},
               {"seeds_tried", res.seeds_tried},
               {"inflatable_input", res.inflatable_input}};
  if (res.found) {
    r.payload["line"] = line_json(res.found->line);
    r.payload["direction_depth"] = res.found->direction_depth.value;
    r.payload["induced_order"] = res.found->induced_order;
    r.payload["order_respecting"] = res.found->order_respecting;
  } else if (res.best_line) {
    r.payload["best_line"] = line_json(*res.best_line);
  }
  auto header = coord_header("seed_", s.dimension);
  header.insert(header.begin(), "index");
  header.push_back("depth");
  for (auto& h : coord_header("direction_", s.dimension)) header.push_back(h);
  Table t{"seeds", header, {}};
  for (std::size_t k = 0; k < res.outcomes.size(); ++k) {
    std::vector<Table::Cell> row{static_cast<long long>(k)};
    for (auto& c : vector_cells(res.outcomes[k].seed)) row.push_back(c);
    row.emplace_back(res.outcomes[k].value);
    for (auto& c : vector_cells(res.outcomes[k].line.direction().vec())) row.push_back(c);
    t.add(std::move(row));
  }
  r.tables.push_back(std::move(t));
  r.passed = res.found.has_value();
  return r;
}

/// Directions around a deep cone direction, with depth and cone membership.
inline void cone_section(const Scenario& s, const BallSequence& seq, double eps, std::uint64_t seed, std::size_t samples,
                         ExperimentResult& r) {
  TransversalSearchOptions so;
  so.eps = eps;
  const auto found = find_transversal(seq, TransversalMode::order_respecting(), so);
  if (!found.found) return;
  const UnitDirection v0 = found.found->line.direction();
  const DirectionCone cone(seq);
  const Matrix frame = hyperplane_frame(v0);
  Rng rng(seed);
  std::vector<UnitDirection> dirs;
  dirs.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const Vector u = detail::tangent_towards(v0, random_unit_vector(rng, s.dimension));
    dirs.push_back(exp_map(v0, u, uniform(rng, 0.0, 1.0) * 1.2));
  }
  std::vector<double> depths(samples);
  std::vector<char> inside(samples);
  parallel_for(samples, [&](std::size_t k) {
    inside[k] = cone.contains(dirs[k].vec());
    depths[k] = depth(seq.balls(), dirs[k], eps).value;
  });
  auto header = coord_header("v", s.dimension);
  header.insert(header.end(), {"depth", "in_order_cone", "feasible"});
  Table t{"directions", header, {}};
  std::vector<svg::Point> pts;
  for (std::size_t k = 0; k < samples; ++k) {
    const bool feasible = inside[k] && depths[k] <= eps;
    auto row = vector_cells(dirs[k].vec());
    row.emplace_back(depths[k]);
    row.emplace_back(static_cast<long long>(inside[k]));
    row.emplace_back(static_cast<long long>(feasible));
    t.add(std::move(row));
    if (s.dimension == 3) {
      // Stereographic projection from −v0 onto the tangent plane at v0.
      const Vector tc = frame.transpose() * dirs[k].vec();
      const double denom = 1.0 + dirs[k].vec().dot(v0.vec());
      pts.push_back({tc[0] / denom, tc[1] / denom, feasible ? 0 : (depths[k] <= eps ? 1 : 2)});
    }
  }
  r.tables.push_back(std::move(t));
  if (s.dimension == 3)
    r.plots.push_back({"cone_section", svg::scatter(pts, {{"in K(F)", "#1f77b4"}, {"transversal, wrong order", "#ff7f0e"}, {"no transversal", "#d0d0d0"}},
                                                    "Cone of directions (stereographic, centered at a deep direction)", "u1", "u2")});
}

inline ExperimentResult run_cone(const Scenario& s, const RunOverrides& o) {
  ExperimentResult r;
  const auto seq = s.sequence();
  ConvexityOptions opt;
  opt.trials = static_cast<int>(count_param(s, "trials", opt.trials, o));
  opt.eps = o.tolerance.value_or(param_or<double>(s, "eps", opt.eps));
  opt.seed = o.seed.value_or(param_or<std::uint64_t>(s, "seed", opt.seed));
  const auto rep = verify_cone_convexity(seq, opt);
  r.payload = {{"samples_tested", rep.samples_tested},
               {"pairs_tested", rep.pairs_tested},
               {"strictness_checks", rep.strictness_checks},
               {"feasible_directions", rep.feasible_directions},
               {"midpoint_violations", rep.midpoint_violations()},
               {"strictness_violations", rep.strictness_violations()},
               {"max_boundary_gap", rep.max_boundary_gap},
               {"inflatable_input", rep.inflatable_input},
               {"insufficient_directions", rep.insufficient_directions}};
  Table vt{"violations", {"kind", "depth1", "depth2", "depth_point"}, {}};
  for (const auto& v : rep.violations) vt.add({std::string(v.strictness ? "strictness" : "midpoint"), v.depth1, v.depth2, v.depth_point});
  r.tables.push_back(std::move(vt));
  cone_section(s, seq, opt.eps, opt.seed, static_cast<std::size_t>(param_or<long long>(s, "section_samples", 4000)), r);
  r.passed = rep.violations.empty() && !rep.insufficient_directions;
  return r;
}

inline ExperimentResult run_shrink(const Scenario& s, const RunOverrides& o) {
  ExperimentResult r;
  const auto seq = s.sequence();
  const int k = require_k(s);
  const bool ordered = param_or<bool>(s, "ordered", true);
  ShrinkOptions opt;
  if (o.tolerance) opt.search.eps = *o.tolerance;
  const auto out = shrink_to_critical(seq, k, ordered, opt);
  r.payload = {{"k", k},
               {"ordered", ordered},
               {"status", to_string(out.status)},
               {"t_star", out.t_star},
               {"critical_subset", out.critical_subset},
               {"cone_extent_at_t_star", out.cone_extent_at_t_star},
               {"singleton", out.singleton},
               {"feasible_below", out.feasible_below},
               {"infeasible_above", out.infeasible_above},
               {"full_family_gap", out.full_family_gap}};
  if (out.unique_line) r.payload["unique_line"] = line_json(*out.unique_line);
  Table st{"subset_thresholds", {"subset", "t"}, {}};
  for (const auto& sub : out.subsets) st.add({join_indices(sub.subset), sub.t});
  r.tables.push_back(std::move(st));

  if (out.status == ShrinkStatus::Critical) {
    // Best direction depth of the critical subset and the whole family against t.
    const auto n_points = static_cast<std::size_t>(param_or<long long>(s, "curve_points", 25));
    const double t_hi = std::min(1.0, out.t_star + std::max(0.05, 0.25 * out.t_star));
    const auto mode = ordered ? TransversalMode::order_respecting() : TransversalMode::unordered();
    const auto crit = seq.restricted_to(out.critical_subset);
    std::vector<double> ts(n_points), dc(n_points), df(n_points);
    for (std::size_t j = 0; j < n_points; ++j) ts[j] = t_hi * static_cast<double>(j) / static_cast<double>(std::max<std::size_t>(1, n_points - 1));
    TransversalSearchOptions so = opt.search;
    so.stop_at_first = false;
    for (std::size_t j = 0; j < n_points; ++j) {
      const double f = 1.0 - std::min(ts[j], 1.0 - 1e-9);
      dc[j] = find_transversal(crit.scaled(f), mode, so).best_depth;
      df[j] = find_transversal(seq.scaled(f), mode, so).best_depth;
    }
    Table ct{"shrink_curve", {"t", "critical_subset_best_depth", "family_best_depth"}, {}};
    svg::Series a{"critical subset", "#1f77b4", {}}, b{"whole family", "#ff7f0e", {}};
    for (std::size_t j = 0; j < n_points; ++j) {
      ct.add({ts[j], dc[j], df[j]});
      a.points.emplace_back(ts[j], dc[j]);
      b.points.emplace_back(ts[j], df[j]);
    }
    r.tables.push_back(std::move(ct));
    r.plots.push_back({"shrink_curve", svg::line_plot({a, b}, {{out.t_star, "t*"}}, "Best direction depth while shrinking", "t", "best depth")});
  }
  r.passed = out.status == ShrinkStatus::TrivialCollinear ||
             (out.status == ShrinkStatus::Critical && out.feasible_below && out.infeasible_above &&
              out.cone_extent_at_t_star <= 1e-4);
  return r;
}

inline ExperimentResult run_pin(const Scenario& s, const RunOverrides& o) {
  ExperimentResult r;
  auto seq = s.sequence();
  PinningOptions opt;
  if (s.parameters.contains("max_size")) opt.max_size = s.parameters["max_size"].get<int>();
  if (o.tolerance) opt.singleton.eps = *o.tolerance;
  opt.singleton.angular_tolerance = param_or<double>(s, "angular_tolerance", opt.singleton.angular_tolerance);
  std::optional<OrientedLine> line;
  if (s.parameters.contains("line")) {
    line = line_from_json(s.parameters["line"], s.dimension);
  } else {
    // No line given: shrink the whole family to its critical parameter and pin its unique line there.
    const auto out = shrink_to_critical(seq, static_cast<int>(seq.size()), true);
    if (out.status != ShrinkStatus::Critical || !out.unique_line)
      throw PreconditionError("pin: no line given and the family has no critical shrink parameter");
    seq = seq.scaled(1.0 - out.t_star);
    line = out.unique_line;
    r.payload["shrunk_by"] = out.t_star;
  }
  const auto w = pinning_witness(seq, *line, opt);
  const int bound = 2 * s.dimension - 1;
  r.payload["line"] = line_json(*line);
  r.payload["bound"] = bound;
  r.payload["witness"] = w ? Json(*w) : Json(nullptr);
  r.payload["witness_size"] = w ? static_cast<int>(w->size()) : -1;
  r.passed = w && static_cast<int>(w->size()) <= bound;
  return r;
}

inline ExperimentResult run_permutations(const Scenario& s, const RunOverrides& o) {
  ExperimentResult r;
  PermutationOptions opt;
  opt.budget = static_cast<int>(count_param(s, "budget", opt.budget, o));
  opt.eps = o.tolerance.value_or(param_or<double>(s, "eps", opt.eps));
  opt.seed = o.seed.value_or(param_or<std::uint64_t>(s, "seed", opt.seed));
  const auto cat = enumerate_geometric_permutations(s.balls, opt);
  const bool applies = is_unit_disjoint(s.balls) && s.balls.size() >= 9;
  const bool within = cat.orders.size() <= 2 && (cat.orders.size() < 2 || cat.adjacency_swap.has_value());
  r.payload = {{"orders", cat.orders},
               {"count", cat.orders.size()},
               {"directions_sampled", cat.directions_sampled},
               {"feasible_directions", cat.feasible_directions},
               {"theorem_applies", applies},
               {"within_bound", within}};
  if (cat.adjacency_swap) r.payload["adjacency_swap"] = {cat.adjacency_swap->first, cat.adjacency_swap->second};
  auto header = coord_header("direction_", s.dimension);
  header.insert(header.begin(), "order");
  Table t{"orders", header, {}};
  for (std::size_t k = 0; k < cat.orders.size(); ++k) {
    std::vector<Table::Cell> row{join_indices(cat.orders[k])};
    for (auto& c : vector_cells(cat.representatives[k].vec())) row.push_back(c);
    t.add(std::move(row));
  }
  r.tables.push_back(std::move(t));
  r.passed = !applies || within;
  return r;
}

inline ExperimentResult run_helly(const Scenario& s, const RunOverrides& o) {
  ExperimentResult r;
  const int k = require_k(s);
  const bool ordered = param_or<bool>(s, "ordered", false);
  HellyOptions opt;
  if (o.tolerance) opt.search.eps = *o.tolerance;
  const auto rep = verify_helly_property(s.sequence(), k, ordered, opt);
  r.payload = {{"k", rep.k},
               {"ordered", rep.ordered},
               {"subsets_checked", rep.subsets_checked},
               {"premise", rep.premise},
               {"conclusion_t", rep.conclusion_t},
               {"conclusion", rep.conclusion},
               {"theorem_applies", rep.theorem_applies},
               {"engine_defect", rep.engine_defect}};
  if (rep.conclusion_ort) r.payload["conclusion_ort"] = *rep.conclusion_ort;
  if (rep.counterexample) {
    r.payload["counterexample"] = *rep.counterexample;
    r.payload["counterexample_depth"] = rep.counterexample_depth;
  }
  r.passed = !rep.engine_defect;
  return r;
}

inline double param_required(const Scenario& s, const char* key) {
  const auto it = s.parameters.find(key);
  if (it == s.parameters.end()) throw ScenarioError(std::string("parameters.") + key, "required for verify-appendix");
  return it->get<double>();
}

inline ExperimentResult run_verify_appendix(const Scenario& s, const RunOverrides& o) {
  ExperimentResult r;
  const double b = param_required(s, "b"), e = param_required(s, "e");
  std::optional<QabParams> p;
  try {
    p.emplace(b, e);
  } catch (const PreconditionError& err) {
    throw ScenarioError("parameters", err.what());
  }
  const auto samples = static_cast<std::size_t>(count_param(s, "samples", 10000, o));
  const auto ident = check_identities(*p, samples, o.tolerance);
  ConcavityOptions copt;
  copt.fd.step = param_or<double>(s, "fd_step", copt.fd.step);
  if (!(copt.fd.step >= 1e-6 && copt.fd.step <= 1e-4)) throw ScenarioError("parameters.fd_step", "must lie in [1e-6, 1e-4]");
  const auto conc = check_concavity(*p, std::min<std::size_t>(samples, 2000), copt);

  Json ids = Json::object();
  for (const auto& [name, err] : ident.max_rel_error) ids[name] = err;
  r.payload = {{"b", b},
               {"e", e},
               {"delta", p->delta()},
               {"identity_tolerance", o.tolerance.value_or(identity_tolerance(*p))},
               {"identity_samples", ident.samples},
               {"identity_max_rel_error", ids},
               {"identity_violations", ident.violations.size()},
               {"sign_violations", ident.sign_violations.size()},
               {"domain_empty", ident.domain_empty},
               {"concavity",
                {{"samples", conc.samples},
                 {"gzz_violations", conc.gzz_violations},
                 {"det_violations", conc.det_violations},
                 {"sign_disagreements", conc.sign_disagreements},
                 {"max_hessian_rel_error", conc.max_hessian_rel_error},
                 {"hessian_mismatches", conc.hessian_mismatches},
                 {"slice_samples", conc.slice_samples},
                 {"slice_violations", conc.slice_violations}}}};
  bool qab_ok = true;
  const auto frames = static_cast<int>(param_or<long long>(s, "qab_frames", 0));
  if (frames > 0) {
    const auto trials = static_cast<std::size_t>(param_or<long long>(s, "qab_trials", 10000));
    Rng rng(o.seed.value_or(param_or<std::uint64_t>(s, "seed", 0x9ab)));
    Vector ca(4), cb(4);
    ca << 0, 0, 0, -b;
    cb << e, 0, 0, b;
    std::size_t violations = 0;
    double max_excess = -std::numeric_limits<double>::infinity(), mismatch = 0.0;
    for (int f = 0; f < frames; ++f) {
      const auto rep = check_Qab_convexity(Ball(ca, 1.0), Ball(cb, 1.0), trials, random_frame(rng));
      violations += rep.violations.size();
      max_excess = std::max(max_excess, rep.max_excess);
      mismatch = std::max(mismatch, rep.max_frame_mismatch);
    }
    r.payload["qab"] = {{"frames", frames}, {"trials_per_frame", trials}, {"violations", violations},
                        {"max_excess", max_excess}, {"max_frame_mismatch", mismatch}};
    qab_ok = violations == 0;
  }

  Table it{"identities", {"identity", "max_rel_error"}, {}};
  for (const auto& [name, err] : ident.max_rel_error) it.add({name, err});
  r.tables.push_back(std::move(it));
  Table vt{"violations", {"identity", "z", "w", "lhs", "rhs", "rel_error"}, {}};
  for (const auto& v : ident.violations) vt.add({v.name, v.z, v.w, v.lhs, v.rhs, v.rel_error});
  for (const auto& v : ident.sign_violations) vt.add({v.name, v.z, v.w, v.lhs, 0.0, 0.0});
  r.tables.push_back(std::move(vt));

  const auto rows = static_cast<std::size_t>(param_or<long long>(s, "table_rows", 1000));
  Table st{"samples",
           {"z", "w", "f", "G", "gamma_plus", "gamma_minus", "gamma", "P", "S", "mu1", "mu2", "lambda_plus", "lambda_minus",
            "theta1", "theta2", "chi1", "chi2", "chi_star", "chi", "Delta", "Delta1", "Delta2", "G_zz", "G_zw", "G_ww"},
           {}};
  for (const auto& [z, w] : sample_lune(*p, rows, 1e-6)) {
    const auto a = eval_sample(*p, z, w);
    st.add({a.z, a.w, a.f, a.G, a.gamma_plus, a.gamma_minus, a.gamma, a.P, a.S, a.mu1, a.mu2, a.lambda_plus, a.lambda_minus,
            a.theta1, a.theta2, a.chi1, a.chi2, a.chi_star, a.chi, a.Delta, a.Delta1, a.Delta2, a.hessian_closed(0, 0),
            a.hessian_closed(0, 1), a.hessian_closed(1, 1)});
  }
  r.tables.push_back(std::move(st));

  // Heatmap of G over the lune's bounding box.
  const LuneDomain dom{*p};
  const int cols = 160, grid_rows = std::max(20, static_cast<int>(160 * dom.w_half_width() / dom.z_half_width()));
  std::vector<std::vector<double>> grid(static_cast<std::size_t>(grid_rows), std::vector<double>(cols));
  for (int i = 0; i < grid_rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const auto [z, w] = dom.from_unit_square((j + 0.5) / cols, (i + 0.5) / grid_rows);
      grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          dom.contains(z, w) ? eval_G(*p, z, w) : std::numeric_limits<double>::quiet_NaN();
    }
  std::ostringstream title;
  title << "G(z, w) on the lune, b = " << b << ", e = " << e;
  r.plots.push_back({"lune_G", svg::heatmap(grid, {-dom.z_half_width(), dom.z_half_width()}, {-dom.w_half_width(), dom.w_half_width()},
                                            title.str(), "z", "w")});
  r.passed = ident.passed() && conc.passed() && qab_ok;
  return r;
}

inline ExperimentResult run_pentagon(const Scenario& s, const RunOverrides&) {
  ExperimentResult r;
  const double eps = param_or<double>(s, "epsilon", 0.01);
  const BallFamily discs = s.balls.empty() ? make_hadwiger_pentagon(eps) : s.balls;
  if (discs.size() != 5 || family_dimension(discs) != 2) throw ScenarioError("balls", "pentagon needs five planar discs");
  const auto c = certify_pentagon(discs);
  const auto feasible = std::count_if(c.quadruple_depths.begin(), c.quadruple_depths.end(), [](double d) { return d <= 0.0; });
  r.payload = {{"epsilon", eps},
               {"quadruples_feasible", feasible},
               {"quadruples", c.quadruple_depths.size()},
               {"full_family_depth", c.full_depth},
               {"full_family_feasible", c.full_depth <= 0.0},
               {"certified", c.holds}};
  Table t{"quadruples", {"omitted_disc", "min_depth"}, {}};
  for (std::size_t k = 0; k < c.quadruple_depths.size(); ++k) t.add({static_cast<long long>(k), c.quadruple_depths[k]});
  t.add({std::string("none"), c.full_depth});
  r.tables.push_back(std::move(t));
  r.passed = c.holds;
  return r;
}

}  // namespace detail

inline ExperimentResult run_experiment(const Scenario& s, const RunOverrides& o = {}) {
  switch (s.experiment) {
    case Experiment::CheckInflatable: return detail::run_check_inflatable(s, o);
    case Experiment::FindTransversal: return detail::run_find_transversal(s, o);
    case Experiment::Cone: return detail::run_cone(s, o);
    case Experiment::Shrink: return detail::run_shrink(s, o);
    case Experiment::Pin: return detail::run_pin(s, o);
    case Experiment::Permutations: return detail::run_permutations(s, o);
    case Experiment::Helly: return detail::run_helly(s, o);
    case Experiment::VerifyAppendix: return detail::run_verify_appendix(s, o);
    case Experiment::Pentagon: return detail::run_pentagon(s, o);
  }
  throw PreconditionError("unknown experiment");
}

}  // namespace translab
