#ifndef ACEV_SCHEMES_HPP
#define ACEV_SCHEMES_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "acev/model.hpp"
#include "acev/stable_rng.hpp"

namespace acev {

enum class Scheme { implicit, em, drift_implicit };

std::string_view scheme_name(Scheme s);
// Accepts "implicit", "em", "drift-implicit" (and "drift_implicit").
Scheme parse_scheme(std::string_view name);

// Current state and the increments driving one step.
struct StepInputs {
  double x = 0.0;
  double dW = 0.0;
  double dZ = 0.0;
};

struct StepDiagnostics {
  // D = x + (a - sigma1^2 x^{2 gamma - 1} / 2) dt + sigma2 x^{1/alpha} dZ
  double d_value = 0.0;
  bool d_negative = false;
  // sigma1^2 x^{2 gamma - 1} dW^2 + 4 (1 + k dt) |D|
  double sqrt_argument = 0.0;
};

struct ImplicitStepResult {
  double next = 0.0;
  StepDiagnostics diag;
};

// Positivity-preserving step: the square of the positive root of
//   (1 + k dt) y^2 - sigma1 x^{gamma - 1/2} dW y - |D| = 0.
// Throws std::invalid_argument if x < 0 or x is not finite, and
// std::domain_error if the root argument is NaN.
ImplicitStepResult implicit_step(const ModelParams& p, const GridSpec& grid, StepInputs in);

// Explicit Euler-Maruyama with positive-part coefficients; may go negative.
double em_step(const ModelParams& p, const GridSpec& grid, StepInputs in);

struct DriftImplicitStepResult {
  double next = 0.0;
  // x == 0 or a == 0: the quadratic loses its constant term and the step
  // returns (B + |B|) / 2.
  bool degenerate = false;
};

// Positive root of y^2 - B y - C = 0 with B = x (1 - k dt) + g(x) dW + h(x) dZ
// and C = a x dt.
DriftImplicitStepResult drift_implicit_step(const ModelParams& p, const GridSpec& grid,
                                            StepInputs in);

struct PathDiagnostics {
  std::size_t d_negative_steps = 0;
  // Step indices i (0-based, step t_i -> t_{i+1}) where D < 0.
  std::vector<std::size_t> d_negative_indices;
  std::size_t degenerate_steps = 0;
  std::size_t negative_states = 0;
  // Extremes over X_{t_0}, ..., X_{t_n}.
  double max_state = 0.0;
  double min_state = 0.0;
};

struct PathResult {
  double terminal = 0.0;
  std::optional<std::vector<double>> path;
  PathDiagnostics diagnostics;
};

// Throws std::invalid_argument when the increment grid length differs from grid.n().
PathResult simulate_path(Scheme scheme, const ModelParams& p, const GridSpec& grid,
                         const IncrementGrid& increments, bool record_path = false);

// Same, over raw increment spans (used by the hot loops to avoid copies).
PathResult simulate_path(Scheme scheme, const ModelParams& p, const GridSpec& grid,
                         std::span<const double> dW, std::span<const double> dZ,
                         bool record_path = false);

struct StepDecomposition {
  double drift_term = 0.0;      // (a - k_n x) dt
  double diffusion_term = 0.0;  // sigma1 x^gamma dW
  double jump_term = 0.0;       // sigma2 x^{1/alpha} dZ
  // next - x - (the three terms above)
  double remainder = 0.0;
  // The same remainder assembled from its closed-form pieces.
  double remainder_closed_form = 0.0;
  // sigma1 x^{gamma-1/2} dW sqrt(sqrt_argument) / (2 (1 + k dt)^2)
  double martingale_increment = 0.0;
  double d_minus = 0.0;
};

// `next` is expected to come from implicit_step on the same inputs.
StepDecomposition decompose_step(const ModelParams& p, const GridSpec& grid, StepInputs in,
                                 double next);

}  // namespace acev

#endif  // ACEV_SCHEMES_HPP
