#include "acev/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace acev {

namespace {

// Validation is done once by the callers; this is the per-sample kernel.
CoupledPair coupled_pair_unchecked(Scheme scheme, const ModelParams& params, const GridSpec& fine,
                                   const GridSpec& coarse, std::uint64_t seed,
                                   std::uint64_t stream_id, StableNormalization normalization) {
  const StableLawSpec law(params.alpha, normalization, fine.dt());
  const auto grids = coupled_grids(seed, stream_id, coarse.n(), law, params.sigma2 > 0.0);
  CoupledPair pair;
  pair.fine_terminal = simulate_path(scheme, params, fine, grids.fine).terminal;
  pair.coarse_terminal = simulate_path(scheme, params, coarse, grids.coarse).terminal;
  pair.abs_diff = std::abs(pair.fine_terminal - pair.coarse_terminal);
  return pair;
}

}  // namespace

CoupledPair simulate_coupled_pair(Scheme scheme, const ModelParams& params, double T,
                                  std::size_t n, std::uint64_t seed, std::uint64_t stream_id,
                                  StableNormalization normalization) {
  if (n == 0) throw std::invalid_argument("coarse step count must be at least 1");
  require_assumption_A(params, T, 2 * n);
  require_assumption_A(params, T, n);
  const GridSpec fine(T, 2 * n, params.k);
  const GridSpec coarse(T, n, params.k);
  return coupled_pair_unchecked(scheme, params, fine, coarse, seed, stream_id, normalization);
}

std::size_t squared_sample_rule(std::size_t n, std::size_t factor) {
  const std::size_t m = factor * n;
  return m * m;
}

StrongErrorReport estimate_strong_error(Scheme scheme, const ModelParams& params, double T,
                                        std::size_t n, std::size_t samples, std::uint64_t seed,
                                        const SimulationOptions& options) {
  if (samples < 100) {
    throw std::invalid_argument("strong error estimation needs at least 100 samples, got " +
                                std::to_string(samples));
  }
  if (n == 0) throw std::invalid_argument("coarse step count must be at least 1");
  require_assumption_A(params, T, 2 * n);
  require_assumption_A(params, T, n);
  const GridSpec fine(T, 2 * n, params.k);
  const GridSpec coarse(T, n, params.k);

  const auto acc = chunked_reduce<MeanAccumulator>(
      samples, options.workers, [&](std::size_t begin, std::size_t end, MeanAccumulator& local) {
        for (std::size_t i = begin; i < end; ++i) {
          const auto pair = coupled_pair_unchecked(scheme, params, fine, coarse, seed,
                                                   sample_stream_id(n, i), options.normalization);
          local.add(pair.abs_diff);
        }
      });

  StrongErrorReport report;
  report.scheme = scheme;
  report.n = n;
  report.samples = samples;
  report.s_n = acc.mean;
  report.std_error = acc.stderr_of_mean();
  return report;
}

std::string_view rate_method_name(RateMethod m) {
  return m == RateMethod::log_difference ? "log_difference" : "least_squares";
}

ReferenceLines reference_lines(double alpha) {
  return ReferenceLines{0.5, 1.0 / (2.0 * alpha), alpha / 4.0};
}

double theoretical_floor(double alpha, double alpha_minus) {
  return 0.5 * std::min(alpha_minus / 2.0, 1.0 / alpha);
}

RateReport rate_from_errors(std::span<const StrongErrorReport> levels, double alpha,
                            RateMethod method, double alpha_margin) {
  if (levels.size() < 2) throw std::invalid_argument("rate estimation needs at least two levels");
  for (const auto& l : levels) {
    if (!(l.s_n > 0.0)) {
      throw std::runtime_error("strong error estimate at n = " + std::to_string(l.n) +
                               " is not positive; cannot take logarithms");
    }
  }
  RateReport report;
  report.scheme = levels.front().scheme;
  report.alpha = alpha;
  report.method = method;
  report.levels.assign(levels.begin(), levels.end());
  report.reference = reference_lines(alpha);
  report.alpha_minus = alpha - alpha_margin;
  report.theoretical_floor = theoretical_floor(alpha, report.alpha_minus);

  // Var(log10 S) by the delta method.
  auto log_var = [](const StrongErrorReport& l) {
    const double rel = l.std_error / (l.s_n * std::numbers::ln10);
    return rel * rel;
  };

  if (method == RateMethod::log_difference) {
    if (levels.size() != 2 || levels[1].n != 10 * levels[0].n) {
      throw std::invalid_argument("log-difference rate needs exactly the levels n and 10 n");
    }
    report.rate_estimate = std::log10(levels[0].s_n) - std::log10(levels[1].s_n);
    report.rate_stderr = std::sqrt(log_var(levels[0]) + log_var(levels[1]));
    return report;
  }

  const double count = static_cast<double>(levels.size());
  double mean_x = 0.0;
  for (const auto& l : levels) mean_x += std::log10(static_cast<double>(l.n));
  mean_x /= count;
  double sxx = 0.0;
  for (const auto& l : levels) {
    const double dx = std::log10(static_cast<double>(l.n)) - mean_x;
    sxx += dx * dx;
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("least-squares rate needs distinct n values");
  double slope = 0.0;
  double var = 0.0;
  for (const auto& l : levels) {
    const double w = (std::log10(static_cast<double>(l.n)) - mean_x) / sxx;
    slope += w * std::log10(l.s_n);
    var += w * w * log_var(l);
  }
  report.rate_estimate = -slope;
  report.rate_stderr = std::sqrt(var);
  return report;
}

RateReport estimate_rate(Scheme scheme, const ModelParams& params, double T, std::size_t n0,
                         const SampleRule& samples_fn, std::uint64_t seed,
                         const SimulationOptions& options, const RateOptions& rate) {
  if (n0 < 8) throw std::invalid_argument("rate estimation needs n0 >= 8");
  std::vector<std::size_t> ns;
  if (rate.method == RateMethod::log_difference) {
    ns = {n0, 10 * n0};
  } else {
    ns = rate.ladder.empty() ? std::vector<std::size_t>{n0, 2 * n0, 4 * n0, 8 * n0} : rate.ladder;
  }
  std::vector<StrongErrorReport> levels;
  levels.reserve(ns.size());
  for (const std::size_t n : ns) {
    levels.push_back(estimate_strong_error(scheme, params, T, n, samples_fn(n), seed, options));
  }
  return rate_from_errors(levels, params.alpha, rate.method, rate.alpha_margin);
}

SweepResult rate_sweep(Scheme scheme, const ModelParams& base, double T, std::size_t n0,
                       std::span<const double> alphas, const SampleRule& samples_fn,
                       std::uint64_t seed, const SimulationOptions& options,
                       const RateOptions& rate) {
  SweepResult out;
  for (const double alpha : alphas) {
    ModelParams params = base;
    params.alpha = alpha;
    auto report = validate_assumption_A(params, T, n0);
    if (!(alpha > 1.0 && alpha < 2.0)) {
      report.violations.push_back({"alpha_range", "alpha must lie in (1, 2)"});
    }
    if (!report.ok()) {
      out.skipped.push_back({alpha, std::move(report.violations)});
      continue;
    }
    out.reports.push_back(estimate_rate(scheme, params, T, n0, samples_fn, seed, options, rate));
  }
  return out;
}

}  // namespace acev
