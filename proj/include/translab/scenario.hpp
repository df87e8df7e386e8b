#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "translab/generators.hpp"
#include "translab/helly.hpp"

namespace translab {

using Json = nlohmann::json;

inline constexpr int kScenarioSchemaVersion = 1;

enum class Experiment { CheckInflatable, FindTransversal, Cone, Shrink, Pin, Permutations, Helly, VerifyAppendix, Pentagon };

inline constexpr std::array<std::pair<Experiment, const char*>, 9> kExperimentNames{{
    {Experiment::CheckInflatable, "check-inflatable"},
    {Experiment::FindTransversal, "find-transversal"},
    {Experiment::Cone, "cone"},
    {Experiment::Shrink, "shrink"},
    {Experiment::Pin, "pin"},
    {Experiment::Permutations, "permutations"},
    {Experiment::Helly, "helly"},
    {Experiment::VerifyAppendix, "verify-appendix"},
    {Experiment::Pentagon, "pentagon"},
}};

inline const char* to_string(Experiment e) {
  for (const auto& [k, name] : kExperimentNames)
    if (k == e) return name;
  return "?";
}

inline std::optional<Experiment> experiment_from_string(const std::string& s) {
  for (const auto& [k, name] : kExperimentNames)
    if (s == name) return k;
  return std::nullopt;
}

/// A scenario file that does not parse or does not validate. `field` is a JSON-pointer-like
/// path ("balls[2].radius"); `line`/`column` are set for syntax errors.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string field, const std::string& message, int line = 0, int column = 0)
      : std::runtime_error(format(field, message, line, column)), field_(std::move(field)), line_(line), column_(column) {}
  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& field, const std::string& message, int line, int column) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ", column " + std::to_string(column) + ": ";
    if (!field.empty()) out += field + ": ";
    return out + message;
  }
  std::string field_;
  int line_, column_;
};

struct Scenario {
  std::string name;
  int dimension = 0;
  BallFamily balls;
  std::optional<Permutation> order;
  Experiment experiment = Experiment::CheckInflatable;
  Json parameters = Json::object();

  BallSequence sequence() const {
    return order ? BallSequence(balls, *order) : BallSequence(balls);
  }
};

// ---------------------------------------------------------------------------------------------
// Parameters

namespace detail {

struct ParamSpec {
  const char* key;
  enum Kind { Real, Count, Bool, Text, Object } kind;
};

inline const std::vector<ParamSpec>& param_specs(Experiment e) {
  using K = ParamSpec::Kind;
  static const std::vector<ParamSpec> inflatable{};
  static const std::vector<ParamSpec> transversal{{"mode", K::Text}, {"sphere_samples", K::Count}, {"eps", K::Real}};
  static const std::vector<ParamSpec> cone{{"trials", K::Count}, {"eps", K::Real}, {"seed", K::Count}, {"section_samples", K::Count}};
  static const std::vector<ParamSpec> shrink{{"k", K::Count}, {"ordered", K::Bool}, {"curve_points", K::Count}};
  static const std::vector<ParamSpec> pin{{"line", K::Object}, {"max_size", K::Count}, {"angular_tolerance", K::Real}};
  static const std::vector<ParamSpec> perms{{"budget", K::Count}, {"seed", K::Count}, {"eps", K::Real}};
  static const std::vector<ParamSpec> helly{{"k", K::Count}, {"ordered", K::Bool}};
  static const std::vector<ParamSpec> appendix{{"b", K::Real},          {"e", K::Real},         {"samples", K::Count},
                                               {"fd_step", K::Real},    {"qab_frames", K::Count}, {"qab_trials", K::Count},
                                               {"seed", K::Count},      {"table_rows", K::Count}};
  static const std::vector<ParamSpec> pentagon{{"epsilon", K::Real}};
  switch (e) {
    case Experiment::CheckInflatable: return inflatable;
    case Experiment::FindTransversal: return transversal;
    case Experiment::Cone: return cone;
    case Experiment::Shrink: return shrink;
    case Experiment::Pin: return pin;
    case Experiment::Permutations: return perms;
    case Experiment::Helly: return helly;
    case Experiment::VerifyAppendix: return appendix;
    case Experiment::Pentagon: return pentagon;
  }
  return inflatable;
}

inline void check_param_kind(const std::string& field, const Json& v, ParamSpec::Kind kind) {
  using K = ParamSpec::Kind;
  bool ok = false;
  switch (kind) {
    case K::Real: ok = v.is_number() && std::isfinite(v.get<double>()); break;
    case K::Count: ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0); break;
    case K::Bool: ok = v.is_boolean(); break;
    case K::Text: ok = v.is_string(); break;
    case K::Object: ok = v.is_object(); break;
  }
  static const char* names[] = {"a finite number", "a non-negative integer", "a boolean", "a string", "an object"};
  if (!ok) throw ScenarioError(field, std::string("must be ") + names[kind]);
}

}  // namespace detail

/// Rejects unknown or ill-typed parameters for the experiment.
inline void validate_parameters(Experiment e, const Json& params) {
  if (!params.is_object()) throw ScenarioError("parameters", "must be an object");
  const auto& specs = detail::param_specs(e);
  for (const auto& [key, value] : params.items()) {
    const auto it = std::find_if(specs.begin(), specs.end(), [&](const auto& s) { return key == s.key; });
    const std::string field = "parameters." + key;
    if (it == specs.end()) throw ScenarioError(field, std::string("unknown parameter for experiment ") + to_string(e));
    detail::check_param_kind(field, value, it->kind);
  }
}

template <class T>
T param_or(const Scenario& s, const char* key, T fallback) {
  const auto it = s.parameters.find(key);
  return it == s.parameters.end() ? fallback : it->template get<T>();
}

// ---------------------------------------------------------------------------------------------
// JSON conversion

namespace detail {

inline Vector read_vector(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ScenarioError(field, "must be a non-empty array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw ScenarioError(field + "[" + std::to_string(k) + "]", "must be a number");
    v[static_cast<Eigen::Index>(k)] = j[k].get<double>();
    if (!std::isfinite(v[static_cast<Eigen::Index>(k)])) throw ScenarioError(field + "[" + std::to_string(k) + "]", "must be finite");
  }
  return v;
}

inline const Json& require(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ScenarioError(key, "missing required field");
  return *it;
}

/// 1-based line and column of a byte offset.
inline std::pair<int, int> line_column(const std::string& text, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t k = 0; k < std::min(offset, text.size()); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

inline Scenario scenario_from_json(const Json& j) {
  if (!j.is_object()) throw ScenarioError("", "scenario must be a JSON object");
  const auto& ver = detail::require(j, "schema_version");
  if (!ver.is_number_integer() || ver.get<int>() != kScenarioSchemaVersion)
    throw ScenarioError("schema_version", "unsupported schema version (expected " + std::to_string(kScenarioSchemaVersion) + ")");
  static const std::set<std::string> known{"schema_version", "name", "dimension", "balls", "order", "experiment", "parameters"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ScenarioError(key, "unknown field");

  Scenario s;
  const auto& name = detail::require(j, "name");
  if (!name.is_string() || name.get<std::string>().empty()) throw ScenarioError("name", "must be a non-empty string");
  s.name = name.get<std::string>();
  if (s.name.find_first_of("/\\") != std::string::npos || s.name == "." || s.name == "..")
    throw ScenarioError("name", "must not contain path separators");

  const auto& exp = detail::require(j, "experiment");
  const auto e = exp.is_string() ? experiment_from_string(exp.get<std::string>()) : std::nullopt;
  if (!e) throw ScenarioError("experiment", "unknown experiment");
  s.experiment = *e;

  const auto& dim = detail::require(j, "dimension");
  if (!dim.is_number_integer() || dim.get<int>() < 1) throw ScenarioError("dimension", "must be a positive integer");
  s.dimension = dim.get<int>();

  const auto& balls = detail::require(j, "balls");
  if (!balls.is_array()) throw ScenarioError("balls", "must be an array");
  for (std::size_t i = 0; i < balls.size(); ++i) {
    const std::string field = "balls[" + std::to_string(i) + "]";
    const auto& b = balls[i];
    if (!b.is_object() || !b.contains("center") || !b.contains("radius"))
      throw ScenarioError(field, "must be an object with center and radius");
    const Vector c = detail::read_vector(b["center"], field + ".center");
    if (c.size() != s.dimension)
      throw ScenarioError(field + ".center", "has " + std::to_string(c.size()) + " coordinates, dimension is " + std::to_string(s.dimension));
    if (!b["radius"].is_number() || !(b["radius"].get<double>() > 0.0) || !std::isfinite(b["radius"].get<double>()))
      throw ScenarioError(field + ".radius", "must be a positive finite number");
    s.balls.emplace_back(c, b["radius"].get<double>());
  }

  if (j.contains("order") && !j["order"].is_null()) {
    const auto& o = j["order"];
    if (!o.is_array()) throw ScenarioError("order", "must be an array of ball indices");
    Permutation p;
    for (const auto& x : o) {
      if (!x.is_number_integer()) throw ScenarioError("order", "must contain integers");
      p.push_back(x.get<int>());
    }
    if (!is_permutation_of_size(p, s.balls.size())) throw ScenarioError("order", "must be a permutation of 0..n-1");
    s.order = p;
  }

  if (j.contains("parameters")) s.parameters = j["parameters"];
  validate_parameters(s.experiment, s.parameters);
  if (s.experiment != Experiment::VerifyAppendix && s.experiment != Experiment::Pentagon && s.balls.empty())
    throw ScenarioError("balls", "experiment needs at least one ball");
  if (!s.balls.empty() && !is_pairwise_disjoint(s.balls)) throw ScenarioError("balls", "balls must be pairwise disjoint");
  return s;
}

inline Scenario parse_scenario(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& err) {
    const auto [line, col] = detail::line_column(text, err.byte > 0 ? err.byte - 1 : 0);
    throw ScenarioError("", "syntax error", line, col);
  }
  return scenario_from_json(j);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

inline Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

inline Json to_json(const Scenario& s) {
  Json j;
  j["schema_version"] = kScenarioSchemaVersion;
  j["name"] = s.name;
  j["experiment"] = to_string(s.experiment);
  j["dimension"] = s.dimension;
  j["balls"] = Json::array();
  for (const auto& b : s.balls) j["balls"].push_back({{"center", vector_json(b.center())}, {"radius", b.radius()}});
  if (s.order) j["order"] = *s.order;
  j["parameters"] = s.parameters;
  return j;
}

/// Serialized with 17 significant digits (nlohmann round-trips doubles exactly).
inline std::string dump_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

/// FNV-1a over the canonical serialization (keys sorted, compact).
inline std::string scenario_hash(const Scenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : to_json(s).dump()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

// ---------------------------------------------------------------------------------------------
// Generation

struct GenerateRequest {
  std::string generator;  // a FamilyKind name or "pentagon"
  int n = 0;
  int d = 0;
  std::uint64_t seed = 0;
  RadiusLaw radii = RadiusLaw::LogUniform;
  double epsilon = 0.01;  // pentagon only
  std::optional<Experiment> experiment;
  std::string name;
};

inline std::optional<FamilyKind> family_kind_from_string(const std::string& s) {
  for (auto k : {FamilyKind::UnitDisjoint, FamilyKind::PairwiseInflatable, FamilyKind::ThinlyDistributed, FamilyKind::NearLinePremise})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

/// Deterministic scenario for the request. The default experiment suits the generator.
inline Scenario generate_scenario(const GenerateRequest& req) {
  Scenario s;
  if (req.generator == "pentagon") {
    s.balls = make_hadwiger_pentagon(req.epsilon);
    s.dimension = 2;
    s.experiment = req.experiment.value_or(Experiment::Pentagon);
    if (s.experiment == Experiment::Pentagon) s.parameters["epsilon"] = req.epsilon;
    std::ostringstream nm;
    nm << "pentagon-eps" << req.epsilon;
    s.name = req.name.empty() ? nm.str() : req.name;
    return s;
  }
  const auto kind = family_kind_from_string(req.generator);
  if (!kind) throw ScenarioError("generator", "unknown generator '" + req.generator + "'");
  if (req.n < 1) throw ScenarioError("n", "must be at least 1");
  if (req.d < 2) throw ScenarioError("d", "must be at least 2");
  Rng rng(req.seed);
  s.balls = generate_family(*kind, req.n, req.d, rng, req.radii);
  s.dimension = req.d;
  s.experiment = req.experiment.value_or(*kind == FamilyKind::NearLinePremise ? Experiment::FindTransversal
                                                                              : Experiment::CheckInflatable);
  s.name = req.name.empty() ? req.generator + "-n" + std::to_string(req.n) + "-d" + std::to_string(req.d) + "-s" +
                                  std::to_string(req.seed)
                            : req.name;
  return s;
}

// ---------------------------------------------------------------------------------------------
// Tables

/// A CSV table; doubles print with 17 significant digits so payloads are byte-reproducible.
struct Table {
  using Cell = std::variant<double, long long, std::string>;
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }

  std::string to_csv() const {
    std::ostringstream out;
    auto cell = [&](const Cell& c) {
      if (const auto* d = std::get_if<double>(&c)) {
        if (std::isnan(*d)) out << "nan";
        else if (std::isinf(*d)) out << (*d > 0 ? "inf" : "-inf");
        else out << std::setprecision(17) << *d;
      } else if (const auto* i = std::get_if<long long>(&c)) {
        out << *i;
      } else {
        const auto& s = std::get<std::string>(c);
        if (s.find_first_of(",\"\n") == std::string::npos) {
          out << s;
        } else {
          out << '"';
          for (char ch : s) out << (ch == '"' ? "\"\"" : std::string(1, ch));
          out << '"';
        }
      }
    };
    for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
    out << "\n";
    for (const auto& row : rows) {
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (k) out << ",";
        cell(row[k]);
      }
      out << "\n";
    }
    return out.str();
  }
};

inline std::string join_indices(const std::vector<int>& v, char sep = ' ') {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? std::string(1, sep) : "") + std::to_string(v[k]);
  return s;
}

}  // namespace translab
