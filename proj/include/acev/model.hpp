#ifndef ACEV_MODEL_HPP
#define ACEV_MODEL_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace acev {

// Coefficients of
//   dX = (a - k X) dt + sigma1 (X+)^gamma dW + sigma2 (X_-^+)^{1/alpha} dZ,  X_0 = x0
// with Z a compensated spectrally positive alpha-stable process.
struct ModelParams {
  double a = 1.05;
  double k = 2.0;
  double sigma1 = 0.37;
  double sigma2 = 0.37;
  double gamma = 0.54;
  double alpha = 1.5;
  double x0 = 1.0;

  // Throws std::invalid_argument when a field is outside its domain
  // (gamma in [1/2, 1), alpha in (1, 2), x0 > 0, a, sigma1, sigma2 >= 0).
  void check_domain() const;
};

// Uniform grid on [0, T] with n steps.
class GridSpec {
public:
  // Throws std::invalid_argument if T <= 0, n == 0 or 1 + k dt <= 0.
  GridSpec(double T, std::size_t n, double k);

  double T() const { return T_; }
  std::size_t n() const { return n_; }
  double dt() const { return dt_; }
  double one_plus_k_dt() const { return one_plus_k_dt_; }
  // k / (1 + k dt)
  double k_n() const { return k_n_; }
  // Lower bound for 1 + k dt, taken as min(1 + k dt, 1).
  double kappa_floor() const { return kappa_floor_; }

private:
  double T_;
  std::size_t n_;
  double dt_;
  double one_plus_k_dt_;
  double k_n_;
  double kappa_floor_;
};

struct Violation {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
};

// Checks 2 gamma < alpha, a - sigma1^2/2 > 0, 1 + k dt > 0 and
// 1 - sigma1^2 dt / 2 > 0. k <= 0 is reported as a warning only.
// Never throws; the grid's k is taken from `params.k` with dt = T / n.
ValidationReport validate_assumption_A(const ModelParams& params, double T, std::size_t n);
ValidationReport validate_assumption_A(const ModelParams& params, const GridSpec& grid);

// Thrown by simulation entry points handed parameters that fail validation.
class ValidationError : public std::invalid_argument {
public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

private:
  ValidationReport report_;
};

// Throws ValidationError unless validate_assumption_A(params, T, n).ok().
// Also runs params.check_domain().
void require_assumption_A(const ModelParams& params, double T, std::size_t n);

double drift(const ModelParams& p, double x);
double diffusion_coeff(const ModelParams& p, double x);
double jump_coeff(const ModelParams& p, double x);

}  // namespace acev

#endif  // ACEV_MODEL_HPP
