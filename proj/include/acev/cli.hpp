#ifndef ACEV_CLI_HPP
#define ACEV_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "acev/convergence.hpp"
#include "acev/model.hpp"
#include "acev/schemes.hpp"
#include "acev/stable_rng.hpp"

namespace acev {

enum class Command { simulate, strong_error, rate_sweep, diagnostics };

enum class OutputFormat { csv, plot };

struct ExperimentConfig {
  Command command = Command::simulate;
  ModelParams model;
  double T = 1.0;
  std::size_t n = 32;
  // Unset: (10 n)^2 for strong-error, (10 n0)^2 per level for rate-sweep,
  // 10^5 for diagnostics.
  std::optional<std::size_t> samples;
  std::uint64_t seed = 1;
  // 0 means default_workers().
  std::size_t workers = 0;
  Scheme scheme = Scheme::implicit;
  StableNormalization normalization = StableNormalization::unit_scale;
  std::string out = "-";
  OutputFormat format = OutputFormat::csv;
  std::optional<std::string> plot;

  // rate-sweep
  std::vector<double> alphas;
  std::optional<std::size_t> n0;
  RateMethod method = RateMethod::log_difference;

  // diagnostics
  double beta = 1.0;
  double inverse_p = 1.0;
  std::optional<double> c_f;
};

enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitValidation = 2 };

// Checks every grid the command will touch. Violations come back as data.
ValidationReport validate_config(const ExperimentConfig& config);

// Executes a parsed configuration. Validation failures print a JSON
// violation list to `err` and return kExitValidation; other failures return
// kExitRuntime. `out == "-"` writes the primary output to `stdout_stream`.
int run(const ExperimentConfig& config, std::ostream& stdout_stream, std::ostream& err);

// Parses `args` (without the program name) and runs. Config files given with
// --config supply defaults that explicit flags override.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parsing only. Returns nullopt when the process should stop after parsing
// (--help, or a parse error already reported on `err`), with `exit_code` set.
std::optional<ExperimentConfig> parse_cli(const std::vector<std::string>& args, std::ostream& out,
                                          std::ostream& err, int& exit_code);

}  // namespace acev

#endif  // ACEV_CLI_HPP
