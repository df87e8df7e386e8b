#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "translab/experiments.hpp"

namespace fs = std::filesystem;
using namespace translab;

namespace {

enum ExitCode { kPass = 0, kViolation = 1, kUsage = 2, kIncident = 3 };

struct CommonFlags {
  std::optional<double> tolerance;
  std::optional<long long> budget;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "runs";
  std::string format = "both";
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--tolerance", f.tolerance, "Feasibility tolerance (identity tolerance for verify-appendix)")
      ->check(CLI::PositiveNumber);
  app->add_option("--budget", f.budget, "Seeds, trials or samples, depending on the experiment")->check(CLI::PositiveNumber);
  app->add_option("--seed", f.seed, "Random seed");
  app->add_option("--out-dir", f.out_dir, "Root directory for run artifacts")->capture_default_str();
  app->add_option("--format", f.format, "Artifacts to write")->check(CLI::IsMember({"csv", "svg", "both"}))->capture_default_str();
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

/// runs/<name>/<timestamp>-<seed>, with a numeric suffix if two runs land in the same second.
fs::path run_directory(const CommonFlags& f, const std::string& name, std::uint64_t seed) {
  const fs::path base = fs::path(f.out_dir) / name;
  const std::string stem = timestamp() + "-" + std::to_string(seed);
  fs::path dir = base / stem;
  for (int k = 1; fs::exists(dir); ++k) dir = base / (stem + "." + std::to_string(k));
  fs::create_directories(dir);
  return dir;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  return s.empty() ? "scenario" : s;
}

int run_scenario(const std::string& path, std::optional<Experiment> forced, const CommonFlags& flags) {
  const auto start = std::chrono::steady_clock::now();
  Json record = {{"tool_version", TRANSLAB_VERSION}, {"scenario_file", path}, {"started_at", timestamp()}};
  std::string name = sanitize(fs::path(path).stem().string());
  std::uint64_t seed = flags.seed.value_or(0);
  int code = kPass;
  std::optional<ExperimentResult> result;

  try {
    Scenario s = load_scenario(path);
    if (forced && *forced != s.experiment) {
      s.experiment = *forced;
      validate_parameters(s.experiment, s.parameters);
    }
    name = s.name;
    if (!flags.seed && s.parameters.contains("seed")) seed = s.parameters["seed"].get<std::uint64_t>();
    record["scenario_name"] = s.name;
    record["experiment"] = to_string(s.experiment);
    record["scenario_hash"] = scenario_hash(s);
    record["scenario"] = to_json(s);
    result = run_experiment(s, RunOverrides{flags.tolerance, flags.budget, flags.seed});
    code = result->passed ? kPass : kViolation;
    record["payload"] = result->payload;
  } catch (const ScenarioError& e) {
    record["error"] = {{"kind", "validation"}, {"message", e.what()}, {"field", e.field()}};
    if (e.line() > 0) record["error"]["line"] = e.line(), record["error"]["column"] = e.column();
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    code = kUsage;
  } catch (const PreconditionError& e) {
    record["error"] = {{"kind", "precondition"}, {"message", e.what()}};
    std::cerr << "error: " << e.what() << "\n";
    code = kUsage;
  } catch (const SolverIncident& e) {
    record["error"] = {{"kind", "solver-incident"}, {"message", e.what()}};
    std::cerr << "solver incident: " << e.what() << "\n";
    code = kIncident;
  } catch (const BudgetExceeded& e) {
    record["error"] = {{"kind", "budget-exceeded"}, {"message", e.what()}};
    std::cerr << "budget exceeded: " << e.what() << "\n";
    code = kIncident;
  } catch (const std::exception& e) {
    record["error"] = {{"kind", "internal"}, {"message", e.what()}};
    std::cerr << "internal error: " << e.what() << "\n";
    code = kIncident;
  }

  static const char* status[] = {"pass", "property-violation", "usage-error", "solver-incident"};
  record["seed"] = seed;
  record["status"] = status[code];
  record["exit_code"] = code;
  record["flags"] = {{"passed", code == kPass}};
  record["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    const fs::path dir = run_directory(flags, sanitize(name), seed);
    if (result) {
      Json artifacts = Json::array();
      if (flags.format != "svg")
        for (const auto& t : result->tables) {
          write_file(dir / "tables" / (t.name + ".csv"), t.to_csv());
          artifacts.push_back("tables/" + t.name + ".csv");
        }
      if (flags.format != "csv")
        for (const auto& p : result->plots) {
          write_file(dir / "plots" / (p.name + ".svg"), p.svg);
          artifacts.push_back("plots/" + p.name + ".svg");
        }
      record["artifacts"] = artifacts;
    }
    write_file(dir / "record.json", record.dump(2) + "\n");
    std::cout << status[code] << "  " << name;
    if (record.contains("experiment")) std::cout << " (" << record["experiment"].get<std::string>() << ")";
    std::cout << "  ->  " << dir.string() << "\n";
    if (result) std::cout << result->payload.dump(2) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: cannot write run artifacts: " << e.what() << "\n";
    if (code == kPass) code = kUsage;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Line transversal experiments for families of balls"};
  app.set_version_flag("--version", TRANSLAB_VERSION);
  app.require_subcommand(1);

  CommonFlags flags;
  std::string scenario_path;
  std::optional<Experiment> forced;

  auto* run = app.add_subcommand("run", "Run the experiment named in a scenario file");
  run->add_option("scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  add_common(run, flags);

  std::vector<std::pair<CLI::App*, Experiment>> experiment_cmds;
  for (const auto& [exp, name] : kExperimentNames) {
    auto* sub = app.add_subcommand(name, std::string("Run the ") + name + " experiment on a scenario file");
    sub->add_option("scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    add_common(sub, flags);
    experiment_cmds.emplace_back(sub, exp);
  }

  GenerateRequest gen;
  std::string generated_out, experiment_name, radii = "log-uniform";
  auto* generate = app.add_subcommand("generate", "Write a scenario with a generated family");
  generate->add_option("--generator", gen.generator, "unit-disjoint, pairwise-inflatable, thinly-distributed, near-line-premise or pentagon")
      ->required();
  generate->add_option("-n,--n", gen.n, "Number of balls");
  generate->add_option("-d,--d", gen.d, "Dimension");
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_option("--radii", radii, "Radius law")->check(CLI::IsMember({"unit", "log-uniform"}))->capture_default_str();
  generate->add_option("--epsilon", gen.epsilon, "Gap between neighbouring pentagon discs")->capture_default_str();
  generate->add_option("--experiment", experiment_name, "Experiment recorded in the scenario");
  generate->add_option("--name", gen.name, "Scenario name");
  generate->add_option("-o,--output", generated_out, "Output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  if (generate->parsed()) {
    try {
      gen.radii = radii == "unit" ? RadiusLaw::Unit : RadiusLaw::LogUniform;
      if (!experiment_name.empty()) {
        gen.experiment = experiment_from_string(experiment_name);
        if (!gen.experiment) throw ScenarioError("experiment", "unknown experiment '" + experiment_name + "'");
      }
      const std::string text = dump_scenario(generate_scenario(gen));
      if (generated_out.empty()) {
        std::cout << text;
      } else {
        write_file(fs::absolute(generated_out), text);
        std::cout << "wrote " << generated_out << "\n";
      }
      return kPass;
    } catch (const ScenarioError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kUsage;
    } catch (const PreconditionError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kUsage;
    } catch (const BudgetExceeded& e) {
      std::cerr << "infeasible generator request: " << e.what() << "\n";
      return kIncident;
    }
  }

  for (const auto& [sub, exp] : experiment_cmds)
    if (sub->parsed()) forced = exp;
  return run_scenario(scenario_path, forced, flags);
}
