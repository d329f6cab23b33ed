#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spherevar/pointset.hpp"
#include "spherevar/variance.hpp"

namespace spherevar {

enum class Subcommand { sample, variance, regime, partition_dump, verify };
std::string subcommand_name(Subcommand s);

// Fully resolved description of one CLI invocation.  Identical configs with
// the same seed produce byte-identical output files.
struct ExperimentConfig {
  Subcommand cmd = Subcommand::verify;

  // process selection
  std::string process = "iid";
  int d = 2;
  int n = 0;
  int L = -1;

  // cap sizes: phi in radians, or t for threshold-scaled caps
  std::optional<double> phi;
  std::optional<double> t;

  // Monte Carlo controls
  int replicates = 0;
  int centers = 1;
  int replicate = 0;  // replicate index of a single `sample` draw
  std::optional<std::uint64_t> seed;
  int pairs_per_cell = 2000;

  // regime experiment
  std::string regime = "large";
  std::vector<double> grid;
  double small_alpha = 0.0;  // 0 -> default 1/(2d)
  double small_c = 1.0;
  int threshold_size = 0;

  // output
  std::string output;  // empty -> stdout
  std::string format = "csv";

  ProcessSpec process_spec() const;
};

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);

// Locale-independent shortest round-trip formatting (accounts for the
// byte-identical-output guarantee).
std::string format_double(double v);

// Executes the configured experiment, writing results to config.output (or
// `out` when the path is empty).  Returns the process exit code: 0 success,
// 1 domain/usage error, 2 numerical failure.  Error text goes to `err`.
int run_experiment(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

// Deterministic identity suite behind the `verify` subcommand; prints one
// pass/fail line per check and returns true when all pass.
bool run_verify(std::ostream& out);

}  // namespace spherevar
