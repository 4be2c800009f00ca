// osc: run optimizer experiments and near-optimality diagnostics.
//
//   osc run --config exp.json [--algo vhct] [--n 4096] [--c 0.1] ...
//   osc diagnose-dim --objective garland --xi exp --rho 0.75 --alpha 1 --h-max 14
//   osc list
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "osc/analysis.hpp"
#include "osc/harness.hpp"

namespace {

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct RunArgs {
  std::string config;
  std::optional<std::string> algo, objective, out;
  std::optional<std::uint64_t> n, trials, seed, threads;
  std::optional<double> noise, rho, nu1, c, c1, delta, b;
};

struct DimArgs {
  std::string objective;
  std::string xi = "exp";
  double alpha = 1.0;
  double nu1 = 1.0;
  double rho = 0.75;
  double c_num = 2.0;
  double p = 1.0;
  std::uint32_t h_min = 1;
  std::uint32_t h_max = 10;
};

template <typename T>
void put(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

int cmd_run(const RunArgs& a) {
  osc::ExperimentConfig cfg;
  try {
    std::ifstream in(a.config);
    if (!in) throw osc::ConfigError("cannot read config file '" + a.config + "'");
    std::ostringstream text;
    text << in.rdbuf();

    nlohmann::json over = nlohmann::json::object();
    put(over, "algorithm", a.algo);
    put(over, "objective", a.objective);
    put(over, "out", a.out);
    put(over, "n", a.n);
    put(over, "trials", a.trials);
    put(over, "seed", a.seed);
    put(over, "threads", a.threads);
    put(over, "noise", a.noise);
    put(over, "rho", a.rho);
    put(over, "nu1", a.nu1);
    put(over, "c", a.c);
    put(over, "c1", a.c1);
    put(over, "delta", a.delta);
    put(over, "b", a.b);

    // Validate only after overrides so a CLI flag can fill a missing field.
    auto doc = nlohmann::json::parse(text.str(), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      throw osc::ConfigError("config file '" + a.config + "' is not a JSON object");
    }
    doc.merge_patch(over);
    cfg = osc::parse_config(doc.dump());
  } catch (const osc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    const auto result = osc::run_experiment(cfg);
    const auto& last = result.curve.points.back();
    std::cout << cfg.algorithm << " on " << cfg.objective << ": " << cfg.trials
              << " trials, n = " << cfg.n << ", mean R_n = " << last.mean_cum_regret
              << ", mean R_n/n = " << last.mean_avg_regret << '\n';
    std::cout << "wrote " << result.files.size() << " files to " << cfg.out << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}

int cmd_diagnose(const DimArgs& a) {
  std::optional<osc::ObjectiveSpec> objective;
  std::optional<osc::SmoothnessFn> phi;
  try {
    objective = osc::make_objective(a.objective);
    phi = a.xi == "exp" ? osc::SmoothnessFn::exponential(a.nu1, a.rho)
                        : osc::SmoothnessFn::polynomial(a.c_num, a.p);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  try {
    const auto est = osc::estimate_dim(*objective, *phi, a.alpha, a.h_min, a.h_max);
    osc::write_dim_csv(std::cout, est);
    std::cerr << "d = " << est.d << ", C = " << est.c << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}

void cmd_list() {
  std::cout << "algorithms:";
  for (const auto& a : osc::algorithm_names()) std::cout << ' ' << a;
  std::cout << "\nobjectives:";
  for (const auto& o : osc::objective_names()) std::cout << ' ' << o;
  std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical bandit optimizers: VHCT, HCT, T-HOO and POO"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run trials from a JSON config and write CSV results");
  run_cmd->add_option("--config", run.config, "JSON config file")->required();
  run_cmd->add_option("--algo", run.algo, "vhct, hct, thoo, poo-hct or poo-vhct");
  run_cmd->add_option("--objective", run.objective, "Objective name (see `osc list`)");
  run_cmd->add_option("--n", run.n, "Rounds per trial");
  run_cmd->add_option("--trials", run.trials, "Number of trials");
  run_cmd->add_option("--seed", run.seed, "Base seed; trial k uses seed + k");
  run_cmd->add_option("--noise", run.noise, "Half-width of uniform reward noise");
  run_cmd->add_option("--rho", run.rho, "Smoothness decay rho");
  run_cmd->add_option("--nu1", run.nu1, "Smoothness scale nu1");
  run_cmd->add_option("--c", run.c, "Confidence constant c");
  run_cmd->add_option("--c1", run.c1, "Confidence constant c1");
  run_cmd->add_option("--delta", run.delta, "Confidence level delta");
  run_cmd->add_option("--b", run.b, "Reward range bound b");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)");

  DimArgs dim;
  auto* dim_cmd =
      app.add_subcommand("diagnose-dim", "Estimate the near-optimality dimension as CSV");
  dim_cmd->add_option("--objective", dim.objective, "Objective name")->required();
  dim_cmd->add_option("--xi", dim.xi, "Smoothness family")
      ->check(CLI::IsMember({"exp", "poly"}))
      ->capture_default_str();
  dim_cmd->add_option("--alpha", dim.alpha, "epsilon = alpha * xi(h)")->capture_default_str();
  dim_cmd->add_option("--nu1", dim.nu1, "Exponential scale")->capture_default_str();
  dim_cmd->add_option("--rho", dim.rho, "Exponential decay")->capture_default_str();
  dim_cmd->add_option("--c-num", dim.c_num, "Polynomial numerator")->capture_default_str();
  dim_cmd->add_option("--p", dim.p, "Polynomial power")->capture_default_str();
  dim_cmd->add_option("--h-min", dim.h_min, "First depth")->capture_default_str();
  dim_cmd->add_option("--h-max", dim.h_max, "Last depth")->capture_default_str();

  app.add_subcommand("list", "List algorithms and objectives");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (run_cmd->parsed()) return cmd_run(run);
  if (dim_cmd->parsed()) return cmd_diagnose(dim);
  cmd_list();
  return 0;
}
