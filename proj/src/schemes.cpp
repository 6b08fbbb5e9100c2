#include "acev/schemes.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace acev {

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::implicit:
      return "implicit";
    case Scheme::em:
      return "em";
    case Scheme::drift_implicit:
      return "drift-implicit";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "implicit") return Scheme::implicit;
  if (name == "em") return Scheme::em;
  if (name == "drift-implicit" || name == "drift_implicit") return Scheme::drift_implicit;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

ImplicitStepResult implicit_step(const ModelParams& p, const GridSpec& grid, StepInputs in) {
  const double x = in.x;
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument("implicit step needs a finite nonnegative state");
  }
  const double dt = grid.dt();
  const double kappa = grid.one_plus_k_dt();
  // pow(0, 0) == 1 covers the CIR case gamma = 1/2 at x = 0.
  const double x_half_pow = std::pow(x, p.gamma - 0.5);
  const double x_cev_pow = std::pow(x, 2.0 * p.gamma - 1.0);
  const double x_jump_pow = std::pow(x, 1.0 / p.alpha);

  ImplicitStepResult out;
  const double d = x + (p.a - p.sigma1 * p.sigma1 * x_cev_pow / 2.0) * dt +
                   p.sigma2 * x_jump_pow * in.dZ;
  const double s1dw = p.sigma1 * in.dW;
  const double arg = s1dw * s1dw * x_cev_pow + 4.0 * kappa * std::abs(d);
  if (std::isnan(arg)) throw std::domain_error("implicit step: NaN under the square root");
  const double linear = p.sigma1 * x_half_pow * in.dW;
  if (linear == 0.0) {
    // The root is sqrt(|D| / kappa); skipping the sqrt-square round trip
    // keeps long noiseless runs on the exact recursion.
    out.next = std::abs(d) / kappa;
  } else {
    const double root = (linear + std::sqrt(arg)) / (2.0 * kappa);
    out.next = root * root;
  }
  out.diag.d_value = d;
  out.diag.d_negative = d < 0.0;
  out.diag.sqrt_argument = arg;
  return out;
}

double em_step(const ModelParams& p, const GridSpec& grid, StepInputs in) {
  return in.x + drift(p, in.x) * grid.dt() + diffusion_coeff(p, in.x) * in.dW +
         jump_coeff(p, in.x) * in.dZ;
}

DriftImplicitStepResult drift_implicit_step(const ModelParams& p, const GridSpec& grid,
                                            StepInputs in) {
  const double x = in.x;
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument("drift-implicit step needs a finite nonnegative state");
  }
  const double dt = grid.dt();
  const double b = x * (1.0 - p.k * dt) + diffusion_coeff(p, x) * in.dW + jump_coeff(p, x) * in.dZ;
  const double c = p.a * x * dt;
  DriftImplicitStepResult out;
  out.degenerate = !(c > 0.0);
  const double disc = std::sqrt(b * b + 4.0 * c);
  // For b < 0 the textbook root cancels; use the conjugate form.
  if (b >= 0.0) {
    out.next = (b + disc) / 2.0;
  } else {
    const double denom = disc - b;
    out.next = denom > 0.0 ? 2.0 * c / denom : 0.0;
  }
  return out;
}

PathResult simulate_path(Scheme scheme, const ModelParams& p, const GridSpec& grid,
                         const IncrementGrid& increments, bool record_path) {
  if (increments.n != grid.n()) {
    throw std::invalid_argument("increment grid has " + std::to_string(increments.n) +
                                " steps, model grid has " + std::to_string(grid.n()));
  }
  return simulate_path(scheme, p, grid, increments.dW, increments.dZ, record_path);
}

PathResult simulate_path(Scheme scheme, const ModelParams& p, const GridSpec& grid,
                         std::span<const double> dW, std::span<const double> dZ,
                         bool record_path) {
  const std::size_t n = grid.n();
  if (dW.size() != n || dZ.size() != n) {
    throw std::invalid_argument("increment length mismatch: expected " + std::to_string(n) +
                                " steps, got dW " + std::to_string(dW.size()) + ", dZ " +
                                std::to_string(dZ.size()));
  }
  PathResult result;
  PathDiagnostics& diag = result.diagnostics;
  double x = p.x0;
  diag.max_state = x;
  diag.min_state = x;
  if (record_path) {
    result.path.emplace();
    result.path->reserve(n + 1);
    result.path->push_back(x);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const StepInputs in{x, dW[i], dZ[i]};
    switch (scheme) {
      case Scheme::implicit: {
        const auto step = implicit_step(p, grid, in);
        if (step.diag.d_negative) {
          ++diag.d_negative_steps;
          diag.d_negative_indices.push_back(i);
        }
        x = step.next;
        break;
      }
      case Scheme::em:
        x = em_step(p, grid, in);
        break;
      case Scheme::drift_implicit: {
        const auto step = drift_implicit_step(p, grid, in);
        if (step.degenerate) ++diag.degenerate_steps;
        x = step.next;
        break;
      }
    }
    if (x < 0.0) ++diag.negative_states;
    if (x > diag.max_state) diag.max_state = x;
    if (x < diag.min_state) diag.min_state = x;
    if (record_path) result.path->push_back(x);
  }
  result.terminal = x;
  return result;
}

StepDecomposition decompose_step(const ModelParams& p, const GridSpec& grid, StepInputs in,
                                 double next) {
  const double x = in.x;
  const double dt = grid.dt();
  const double kappa = grid.one_plus_k_dt();
  const double x_half_pow = std::pow(x, p.gamma - 0.5);
  const double x_cev_pow = std::pow(x, 2.0 * p.gamma - 1.0);
  const double jump = p.sigma2 * std::pow(x, 1.0 / p.alpha) * in.dZ;

  StepDecomposition out;
  out.drift_term = (p.a - grid.k_n() * x) * dt;
  out.diffusion_term = p.sigma1 * std::pow(x, p.gamma) * in.dW;
  out.jump_term = jump;
  out.remainder = next - x - out.drift_term - out.diffusion_term - out.jump_term;

  const double d = x + (p.a - p.sigma1 * p.sigma1 * x_cev_pow / 2.0) * dt + jump;
  const double s1dw = p.sigma1 * in.dW;
  const double arg = s1dw * s1dw * x_cev_pow + 4.0 * kappa * std::abs(d);
  out.d_minus = d < 0.0 ? -d : 0.0;
  out.martingale_increment =
      p.sigma1 * x_half_pow * in.dW * std::sqrt(arg) / (2.0 * kappa * kappa);

  const double half_var = p.sigma1 * p.sigma1 * x_cev_pow / 2.0;
  out.remainder_closed_form = -jump +
                              half_var * (in.dW * in.dW / (kappa * kappa) - dt / kappa) +
                              p.a * dt * (1.0 / kappa - 1.0) - out.diffusion_term +
                              jump / kappa + out.martingale_increment +
                              2.0 / kappa * out.d_minus;
  return out;
}

}  // namespace acev
