#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spherevar/experiment.hpp"

namespace {

using spherevar::ExperimentConfig;
using spherevar::Subcommand;

// --config is resolved before CLI11 sees the rest of the flags, so explicit
// flags override the file.
ExperimentConfig load_config_file(int argc, char** argv) {
  for (int i = 1; i < argc - 1; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::ifstream in(argv[i + 1]);
      if (!in) throw std::domain_error(std::string("cannot read config file: ") + argv[i + 1]);
      std::ostringstream ss;
      ss << in.rdbuf();
      return spherevar::config_from_json(ss.str());
    }
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  ExperimentConfig config;
  try {
    config = load_config_file(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  bool degrees = false;
  double phi_arg = 0.0;
  double t_arg = 0.0;
  std::uint64_t seed_arg = 0;
  std::vector<double> grid_arg;
  std::vector<CLI::Option*> phi_opts, t_opts, seed_opts;

  CLI::App app{"Point processes on spheres and their cap-count number variance"};
  app.require_subcommand(1);

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--output,-o", config.output, "Output file (default: stdout)");
    cmd->add_option("--format", config.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--config", "JSON config file; explicit flags override it")->expected(1);
  };
  const auto add_process = [&](CLI::App* cmd) {
    cmd->add_option("--process", config.process, "iid | spherical | harmonic | jittered")
        ->check(CLI::IsMember({"iid", "spherical", "harmonic", "jittered"}));
    cmd->add_option("--d", config.d, "Sphere dimension (iid and harmonic; others are S^2)");
    cmd->add_option("--n", config.n, "Point count (iid, spherical) or cell count (jittered)");
    cmd->add_option("--L", config.L, "Harmonic ensemble degree");
  };
  const auto add_mc = [&](CLI::App* cmd) {
    cmd->add_option("--replicates,-M", config.replicates, "Monte Carlo replicates");
    cmd->add_option("--centers,-R", config.centers, "Cap centers per replicate");
    cmd->add_option("--pairs-per-cell", config.pairs_per_cell,
                    "Pairs per cell of the jittered semi-analytic estimator");
    seed_opts.push_back(cmd->add_option("--seed", seed_arg, "Random seed"));
    cmd->add_flag("--degrees", degrees, "Interpret --phi in degrees");
  };

  CLI::App* sample = app.add_subcommand("sample", "Draw one point sample and emit it");
  add_process(sample);
  seed_opts.push_back(sample->add_option("--seed", seed_arg, "Random seed"));
  sample->add_option("--replicate", config.replicate, "Replicate index of the draw");
  add_common(sample);

  CLI::App* variance =
      app.add_subcommand("variance", "Monte Carlo number variance of one cap size");
  add_process(variance);
  phi_opts.push_back(variance->add_option("--phi", phi_arg, "Cap opening angle (radians)"));
  t_opts.push_back(variance->add_option("--t", t_arg, "Threshold parameter; phi = t N^{-1/d}"));
  add_mc(variance);
  add_common(variance);

  CLI::App* regime =
      app.add_subcommand("regime", "Variance across a grid of sizes with an exponent fit");
  add_process(regime);
  regime->add_option("--regime", config.regime, "large | small | threshold")
      ->check(CLI::IsMember({"large", "small", "threshold"}));
  regime->add_option("--grid", grid_arg, "Grid of N (or L) values; t values at threshold")
      ->delimiter(',');
  phi_opts.push_back(regime->add_option("--phi", phi_arg, "Fixed angle of the large-cap regime"));
  regime->add_option("--alpha", config.small_alpha,
                     "Small-cap schedule exponent (0 < alpha < 1/d)");
  regime->add_option("--c", config.small_c, "Small-cap schedule constant");
  regime->add_option("--threshold-size", config.threshold_size,
                     "Fixed N (or L for harmonic) at threshold order");
  add_mc(regime);
  add_common(regime);

  CLI::App* partition = app.add_subcommand("partition", "Equal-area partition tools");
  partition->require_subcommand(1);
  CLI::App* dump = partition->add_subcommand("dump", "Emit the cells of the N-cell partition");
  dump->add_option("--n", config.n, "Number of cells")->required();
  add_common(dump);

  CLI::App* verify = app.add_subcommand("verify", "Run the deterministic identity suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // usage / domain error
  }

  if (sample->parsed()) config.cmd = Subcommand::sample;
  if (variance->parsed()) config.cmd = Subcommand::variance;
  if (regime->parsed()) config.cmd = Subcommand::regime;
  if (partition->parsed()) config.cmd = Subcommand::partition_dump;
  if (verify->parsed()) config.cmd = Subcommand::verify;

  const auto given = [](const std::vector<CLI::Option*>& opts) {
    for (const CLI::Option* o : opts)
      if (o->count() > 0) return true;
    return false;
  };
  if (given(phi_opts)) config.phi = degrees ? phi_arg * M_PI / 180.0 : phi_arg;
  if (given(t_opts)) config.t = t_arg;
  if (given(seed_opts)) config.seed = seed_arg;
  if (!grid_arg.empty()) config.grid = grid_arg;

  if ((config.cmd == Subcommand::variance || config.cmd == Subcommand::regime) &&
      !config.seed) {
    std::cerr << "error: " << subcommand_name(config.cmd)
              << " requires an explicit --seed (reproducibility precondition)\n";
    return 1;
  }

  return spherevar::run_experiment(config, std::cout, std::cerr);
}
