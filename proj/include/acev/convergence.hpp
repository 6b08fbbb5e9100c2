#ifndef ACEV_CONVERGENCE_HPP
#define ACEV_CONVERGENCE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "acev/model.hpp"
#include "acev/parallel.hpp"
#include "acev/schemes.hpp"
#include "acev/stable_rng.hpp"

namespace acev {

struct SimulationOptions {
  StableNormalization normalization = StableNormalization::unit_scale;
  std::size_t workers = default_workers();
};

// Stream id of the `index`-th sample at resolution n. Every (n, index)
// maps to its own stream so levels and samples never share noise.
inline std::uint64_t sample_stream_id(std::size_t n, std::size_t index) {
  return (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint64_t>(index);
}

struct CoupledPair {
  double fine_terminal = 0.0;    // X_T on 2n steps
  double coarse_terminal = 0.0;  // X_T on n steps, same noise
  double abs_diff = 0.0;
};

CoupledPair simulate_coupled_pair(Scheme scheme, const ModelParams& params, double T,
                                  std::size_t n, std::uint64_t seed, std::uint64_t stream_id,
                                  StableNormalization normalization = StableNormalization::unit_scale);

struct StrongErrorReport {
  Scheme scheme = Scheme::implicit;
  std::size_t n = 0;
  std::size_t samples = 0;
  double s_n = 0.0;     // mean |X_T^{2n} - X_T^n|
  double std_error = 0.0;  // sample std / sqrt(samples)
};

// (factor * n)^2, the sample-count rule of the original experiment with factor 10.
std::size_t squared_sample_rule(std::size_t n, std::size_t factor = 10);

// Throws std::invalid_argument for samples < 100.
StrongErrorReport estimate_strong_error(Scheme scheme, const ModelParams& params, double T,
                                        std::size_t n, std::size_t samples, std::uint64_t seed,
                                        const SimulationOptions& options = {});

enum class RateMethod { log_difference, least_squares };

std::string_view rate_method_name(RateMethod m);

struct ReferenceLines {
  double half = 0.5;
  double inv2alpha = 0.0;      // 1 / (2 alpha)
  double alpha_quarter = 0.0;  // alpha / 4
};

ReferenceLines reference_lines(double alpha);

// 0.5 * min(alpha_minus / 2, 1 / alpha)
double theoretical_floor(double alpha, double alpha_minus);

struct RateReport {
  Scheme scheme = Scheme::implicit;
  double alpha = 0.0;
  double rate_estimate = 0.0;
  // Delta-method propagation of the S_n standard errors.
  double rate_stderr = 0.0;
  RateMethod method = RateMethod::log_difference;
  std::vector<StrongErrorReport> levels;
  ReferenceLines reference;
  double alpha_minus = 0.0;
  double theoretical_floor = 0.0;
};

struct RateOptions {
  RateMethod method = RateMethod::log_difference;
  // n values for least squares; empty means {n0, 2 n0, 4 n0, 8 n0}.
  std::vector<std::size_t> ladder;
  // alpha_minus = alpha - alpha_margin for the theoretical floor.
  double alpha_margin = 0.05;
};

// Rate from already estimated levels. log_difference needs exactly two levels
// with n_1 = 10 n_0 and returns log10 S_{n0} - log10 S_{10 n0}; least_squares
// needs at least two levels and returns minus the slope of log10 S on log10 n.
// Throws std::runtime_error when some S_n <= 0.
RateReport rate_from_errors(std::span<const StrongErrorReport> levels, double alpha,
                            RateMethod method, double alpha_margin = 0.05);

// Samples to draw at resolution n.
using SampleRule = std::function<std::size_t(std::size_t n)>;

RateReport estimate_rate(Scheme scheme, const ModelParams& params, double T, std::size_t n0,
                         const SampleRule& samples_fn, std::uint64_t seed,
                         const SimulationOptions& options = {}, const RateOptions& rate = {});

struct SkippedAlpha {
  double alpha = 0.0;
  std::vector<Violation> violations;
};

struct SweepResult {
  std::vector<RateReport> reports;
  std::vector<SkippedAlpha> skipped;
};

// One rate estimate per alpha, sharing the master seed. Alphas failing
// validation with the base parameters are skipped and recorded.
SweepResult rate_sweep(Scheme scheme, const ModelParams& base, double T, std::size_t n0,
                       std::span<const double> alphas, const SampleRule& samples_fn,
                       std::uint64_t seed, const SimulationOptions& options = {},
                       const RateOptions& rate = {});

}  // namespace acev

#endif  // ACEV_CONVERGENCE_HPP
