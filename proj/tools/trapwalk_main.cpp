// trapwalk command line: parameter-grid experiment runs and speed-curve
// export. Exit codes: 0 success, 2 configuration error, 3 runtime failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "trapwalk/experiment.hpp"

namespace {

trapwalk::ExperimentConfig build_config(const std::string& model, const std::string& lambda,
                                        const std::string& alpha, const std::string& q,
                                        std::optional<double> lambda_crit, std::uint64_t steps,
                                        std::uint32_t replicas, std::uint64_t seed,
                                        unsigned threads, const std::string& format, bool curve,
                                        bool timing, const std::string& dump_env,
                                        const std::string& dump_trace) {
  trapwalk::ExperimentConfig config;
  if (!curve) config.model = trapwalk::parse_model(model);
  try {
    config.lambda = trapwalk::parse_grid(lambda);
  } catch (const trapwalk::ConfigError& e) {
    throw trapwalk::ConfigError(std::string("lambda: ") + e.what());
  }
  if (!alpha.empty()) {
    try {
      config.alpha = trapwalk::parse_grid(alpha);
    } catch (const trapwalk::ConfigError& e) {
      throw trapwalk::ConfigError(std::string("alpha: ") + e.what());
    }
  }
  if (!q.empty()) {
    try {
      config.q = trapwalk::parse_grid(q);
    } catch (const trapwalk::ConfigError& e) {
      throw trapwalk::ConfigError(std::string("q: ") + e.what());
    }
  }
  config.lambda_crit = lambda_crit;
  config.steps = steps;
  config.replicas = replicas;
  config.master_seed = seed;
  config.threads = threads;
  config.format = trapwalk::parse_output_format(format);
  config.curve = curve;
  config.timing = timing;
  config.dump_env_path = dump_env;
  config.dump_trace_path = dump_trace;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo simulator for biased random walks among random traps on Z"};
  app.set_config("--config", "", "Flat key=value config file; command line overrides it");

  std::string model = "bouchaud";
  std::string lambda, alpha, q;
  std::optional<double> lambda_crit;
  std::uint64_t steps = 1000000;
  std::uint32_t replicas = 8;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out_path;
  std::string format = "csv";
  bool curve = false;
  bool timing = false;
  std::string dump_env, dump_trace;

  app.add_option("--model", model,
                 "bouchaud | comb_reduced | comb_graph | ladder_reduced | ladder_graph");
  app.add_option("--lambda", lambda, "Bias grid: comma list or start:stop:step")->required();
  app.add_option("--alpha", alpha, "Tail/trap-length rate grid");
  app.add_option("--q", q, "Backbone-exit probability grid, values in (0,1)");
  app.add_option("--lambda-crit", lambda_crit,
                 "Critical bias; with model=bouchaud sets alpha = lambda_crit/lambda");
  app.add_option("--steps", steps, "Steps per replica (curve mode: 0 = theory only)");
  app.add_option("--replicas", replicas, "Independent replicas per grid point");
  app.add_option("--seed", seed, "Master seed; all randomness derives from (seed, replica)");
  app.add_option("--threads", threads, "Worker threads (0 = hardware)")
      ->envname("TRAPWALK_THREADS");
  app.add_option("--out", out_path, "Output path (default stdout)");
  app.add_option("--format", format, "csv | jsonl");
  app.add_flag("--curve", curve, "Emit the speed curve v(lambda) for --lambda-crit");
  app.add_flag("--timing", timing,
               "Fill the wallclock_ms column (makes output non-reproducible)");
  app.add_option("--dump-env", dump_env, "Dump the replica-0 environment window to this path");
  app.add_option("--dump-trace", dump_trace, "Dump a log-spaced replica-0 trajectory trace");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const trapwalk::ExperimentConfig config =
        build_config(model, lambda, alpha, q, lambda_crit, steps, replicas, seed, threads, format,
                     curve, timing, dump_env, dump_trace);

    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) {
        std::cerr << "error: cannot open output path " << out_path << '\n';
        return 2;
      }
    }
    std::ostream& out = out_path.empty() ? std::cout : file;

    if (config.curve) {
      trapwalk::emit_speed_curve(config, out);
    } else {
      trapwalk::run_experiments(config, out);
    }
    return 0;
  } catch (const trapwalk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 3;
  }
}
