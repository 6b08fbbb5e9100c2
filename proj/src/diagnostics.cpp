#include "acev/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "acev/parallel.hpp"
#include "acev/schemes.hpp"
#include "acev/stable_rng.hpp"

namespace acev {

namespace {

// Stream namespace for single-resolution diagnostic paths, disjoint from the
// coupled-pair streams (which never set the top bit for realistic n).
std::uint64_t diagnostic_stream_id(std::size_t n, std::size_t index) {
  return (std::uint64_t{1} << 63) | sample_stream_id(n, index);
}

PathResult diagnostic_path(const ModelParams& params, const GridSpec& grid, std::uint64_t seed,
                           std::size_t index, StableNormalization normalization) {
  const StableLawSpec law(params.alpha, normalization, grid.dt());
  const auto inc = make_increment_grid(seed, diagnostic_stream_id(grid.n(), index), grid.n(), law,
                                       params.sigma2 > 0.0);
  return simulate_path(Scheme::implicit, params, grid, inc);
}

struct StepCounts {
  std::vector<std::size_t> counts;

  void merge(const StepCounts& o) {
    if (counts.size() < o.counts.size()) counts.resize(o.counts.size(), 0);
    for (std::size_t i = 0; i < o.counts.size(); ++i) counts[i] += o.counts[i];
  }
};

struct InverseAccumulator {
  MeanAccumulator moments;
  std::size_t excluded = 0;

  void merge(const InverseAccumulator& o) {
    moments.merge(o.moments);
    excluded += o.excluded;
  }
};

}  // namespace

double dneg_bound_constant(const ModelParams& params, const GridSpec& grid) {
  require_assumption_A(params, grid.T(), grid.n());
  if (params.sigma2 == 0.0) return std::numeric_limits<double>::infinity();
  const double alpha = params.alpha;
  const double feller = params.a - params.sigma1 * params.sigma1 / 2.0;
  const double margin = 1.0 - params.sigma1 * params.sigma1 * grid.dt() / 2.0;
  const double base =
      margin * std::sin(std::numbers::pi * (alpha - 1.0) / 2.0) / std::pow(params.sigma2, alpha);
  return feller * std::pow(base, 1.0 / (alpha - 1.0));
}

double dneg_probability_bound(const ModelParams& params, const GridSpec& grid) {
  const double k = dneg_bound_constant(params, grid);
  if (std::isinf(k)) return 0.0;
  const double alpha = params.alpha;
  return std::exp(-k * std::pow(grid.dt(), -(2.0 - alpha) / (alpha - 1.0)));
}

DNegReport estimate_dneg_frequency(const ModelParams& params, const GridSpec& grid,
                                   std::size_t trials, std::uint64_t seed,
                                   const SimulationOptions& options) {
  if (trials < 10000) {
    throw std::invalid_argument("D-negativity estimation needs at least 10^4 trials, got " +
                                std::to_string(trials));
  }
  DNegReport report;
  report.n = grid.n();
  report.trials = trials;
  report.theoretical_bound = dneg_probability_bound(params, grid);

  const auto tally = chunked_reduce<StepCounts>(
      trials, options.workers, [&](std::size_t begin, std::size_t end, StepCounts& local) {
        local.counts.assign(grid.n(), 0);
        for (std::size_t i = begin; i < end; ++i) {
          const auto path = diagnostic_path(params, grid, seed, i, options.normalization);
          for (const std::size_t step : path.diagnostics.d_negative_indices) ++local.counts[step];
        }
      });

  for (std::size_t i = 0; i < tally.counts.size(); ++i) {
    report.total_negative_steps += tally.counts[i];
    if (tally.counts[i] > report.worst_count) {
      report.worst_count = tally.counts[i];
      report.worst_step = i;
    }
  }
  const double p = static_cast<double>(report.worst_count) / static_cast<double>(trials);
  report.observed_freq = p;
  report.mc_stderr = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return report;
}

MomentReport estimate_scheme_moment(const ModelParams& params, const GridSpec& grid, double beta,
                                    std::size_t paths, std::uint64_t seed,
                                    const SimulationOptions& options) {
  if (!(beta >= 1.0 && beta < params.alpha)) {
    throw std::invalid_argument("scheme moment needs 1 <= beta < alpha");
  }
  if (paths == 0) throw std::invalid_argument("moment estimation needs at least one path");
  require_assumption_A(params, grid.T(), grid.n());

  const auto acc = chunked_reduce<MeanAccumulator>(
      paths, options.workers, [&](std::size_t begin, std::size_t end, MeanAccumulator& local) {
        for (std::size_t i = begin; i < end; ++i) {
          const auto path = diagnostic_path(params, grid, seed, i, options.normalization);
          local.add(std::pow(path.diagnostics.max_state, beta));
        }
      });

  MomentReport report;
  report.beta = beta;
  report.estimate = acc.mean;
  report.std_error = acc.stderr_of_mean();
  report.n = grid.n();
  report.paths = paths;
  return report;
}

MomentReport estimate_inverse_moment(const ModelParams& params, const GridSpec& grid, double p,
                                     std::size_t paths, std::uint64_t seed,
                                     const SimulationOptions& options, std::optional<double> c_f) {
  if (!(p > 0.0)) throw std::invalid_argument("inverse moment order p must be positive");
  if (paths == 0) throw std::invalid_argument("moment estimation needs at least one path");
  require_assumption_A(params, grid.T(), grid.n());

  MomentReport report;
  report.beta = p;
  report.n = grid.n();
  report.paths = paths;
  if (params.gamma == 0.5 && params.sigma1 > 0.0) {
    const double limit = 2.0 * params.a / (params.sigma1 * params.sigma1) - 1.0;
    if (!(p < limit)) {
      report.warnings.push_back("p >= 2a/sigma1^2 - 1 for gamma = 1/2: the inverse moment of the "
                                "process may be infinite");
    }
  }

  const auto acc = chunked_reduce<InverseAccumulator>(
      paths, options.workers, [&](std::size_t begin, std::size_t end, InverseAccumulator& local) {
        for (std::size_t i = begin; i < end; ++i) {
          const double x = diagnostic_path(params, grid, seed, i, options.normalization).terminal;
          if (x == 0.0) {
            ++local.excluded;
            continue;
          }
          local.moments.add(std::pow(x, -p));
        }
      });

  report.estimate = acc.moments.mean;
  report.std_error = acc.moments.stderr_of_mean();
  report.excluded = acc.excluded;
  if (c_f) {
    report.ceiling = (std::pow(params.x0, -p) + *c_f * grid.T()) * std::exp(grid.T() * p * params.k);
  }
  return report;
}

}  // namespace acev
