#ifndef ACEV_DIAGNOSTICS_HPP
#define ACEV_DIAGNOSTICS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "acev/convergence.hpp"
#include "acev/model.hpp"

namespace acev {

// K = (a - sigma1^2/2) ((1 - sigma1^2 dt/2) sin(pi(alpha-1)/2) / sigma2^alpha)^{1/(alpha-1)}.
// Returns +infinity for sigma2 == 0 (no jumps, D cannot go negative).
// Throws ValidationError if the parameters fail validation.
double dneg_bound_constant(const ModelParams& params, const GridSpec& grid);

// exp(-K dt^{-(2-alpha)/(alpha-1)}); exactly 0 when sigma2 == 0.
double dneg_probability_bound(const ModelParams& params, const GridSpec& grid);

struct DNegReport {
  std::size_t n = 0;
  std::size_t trials = 0;
  // max over step index i of the fraction of trials with D_{t_{i+1}} < 0
  double observed_freq = 0.0;
  std::size_t worst_step = 0;
  std::size_t worst_count = 0;
  // total D < 0 events over all steps and trials
  std::size_t total_negative_steps = 0;
  double theoretical_bound = 0.0;
  // binomial standard error sqrt(p (1 - p) / trials) at p = observed_freq
  double mc_stderr = 0.0;
};

// Runs `trials` implicit-scheme paths and tallies D < 0 per step index.
// Throws std::invalid_argument for trials < 10^4.
DNegReport estimate_dneg_frequency(const ModelParams& params, const GridSpec& grid,
                                   std::size_t trials, std::uint64_t seed,
                                   const SimulationOptions& options = {});

struct MomentReport {
  // beta for scheme moments, p for inverse moments
  double beta = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::size_t paths = 0;
  // paths with terminal exactly 0 (inverse moments only)
  std::size_t excluded = 0;
  std::optional<double> ceiling;
  std::vector<std::string> warnings;
};

// Monte Carlo estimate of E[max_i (X^n_{t_i})^beta] for the implicit scheme.
// Throws std::invalid_argument unless 1 <= beta < alpha.
MomentReport estimate_scheme_moment(const ModelParams& params, const GridSpec& grid, double beta,
                                    std::size_t paths, std::uint64_t seed,
                                    const SimulationOptions& options = {});

// Monte Carlo estimate of E[(X^n_T)^{-p}] for the implicit scheme. When
// `c_f` is given the report carries the ceiling (x0^{-p} + c_f T) e^{T p k}.
// Throws std::invalid_argument unless p > 0.
MomentReport estimate_inverse_moment(const ModelParams& params, const GridSpec& grid, double p,
                                     std::size_t paths, std::uint64_t seed,
                                     const SimulationOptions& options = {},
                                     std::optional<double> c_f = std::nullopt);

}  // namespace acev

#endif  // ACEV_DIAGNOSTICS_HPP
