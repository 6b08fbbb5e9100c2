#include "acev/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace acev {

namespace {

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

void ModelParams::check_domain() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (!(gamma >= 0.5 && gamma < 1.0)) fail("gamma must lie in [1/2, 1), got " + fmt_num(gamma));
  if (!(alpha > 1.0 && alpha < 2.0)) fail("alpha must lie in (1, 2), got " + fmt_num(alpha));
  if (!(x0 > 0.0) || !std::isfinite(x0)) fail("x0 must be positive, got " + fmt_num(x0));
  if (!(a >= 0.0) || !std::isfinite(a)) fail("a must be nonnegative, got " + fmt_num(a));
  if (!(sigma1 >= 0.0) || !std::isfinite(sigma1))
    fail("sigma1 must be nonnegative, got " + fmt_num(sigma1));
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
    fail("sigma2 must be nonnegative, got " + fmt_num(sigma2));
  if (!std::isfinite(k)) fail("k must be finite");
}

GridSpec::GridSpec(double T, std::size_t n, double k) : T_(T), n_(n) {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("horizon T must be positive");
  if (n == 0) throw std::invalid_argument("step count n must be at least 1");
  dt_ = T / static_cast<double>(n);
  one_plus_k_dt_ = 1.0 + k * dt_;
  if (!(one_plus_k_dt_ > 0.0)) {
    throw std::invalid_argument("1 + k dt must be positive, got " + fmt_num(one_plus_k_dt_));
  }
  k_n_ = k / one_plus_k_dt_;
  kappa_floor_ = std::min(one_plus_k_dt_, 1.0);
}

ValidationReport validate_assumption_A(const ModelParams& p, double T, std::size_t n) {
  ValidationReport report;
  if (!(2.0 * p.gamma < p.alpha)) {
    report.violations.push_back({"two_gamma_lt_alpha", "2*gamma < alpha fails: 2*gamma = " +
                                                           fmt_num(2.0 * p.gamma) +
                                                           ", alpha = " + fmt_num(p.alpha)});
  }
  const double feller = p.a - p.sigma1 * p.sigma1 / 2.0;
  if (!(feller > 0.0)) {
    report.violations.push_back(
        {"feller", "a - sigma1^2/2 > 0 fails: a - sigma1^2/2 = " + fmt_num(feller)});
  }
  if (n == 0 || !(T > 0.0)) {
    report.violations.push_back({"grid", "grid needs T > 0 and n >= 1"});
    return report;
  }
  const double dt = T / static_cast<double>(n);
  const double one_plus_k_dt = 1.0 + p.k * dt;
  if (!(one_plus_k_dt > 0.0)) {
    report.violations.push_back(
        {"one_plus_k_dt", "1 + k*dt > 0 fails: 1 + k*dt = " + fmt_num(one_plus_k_dt)});
  }
  const double diffusion_margin = 1.0 - p.sigma1 * p.sigma1 * dt / 2.0;
  if (!(diffusion_margin > 0.0)) {
    report.violations.push_back({"one_minus_half_sigma1_sq_dt",
                                 "1 - sigma1^2*dt/2 > 0 fails: 1 - sigma1^2*dt/2 = " +
                                     fmt_num(diffusion_margin)});
  }
  if (!(p.k > 0.0)) {
    report.warnings.push_back("k <= 0: the scheme still converges but the rate guarantee for k > 0 "
                              "does not apply");
  }
  return report;
}

ValidationReport validate_assumption_A(const ModelParams& params, const GridSpec& grid) {
  return validate_assumption_A(params, grid.T(), grid.n());
}

namespace {

std::string summarize(const ValidationReport& report) {
  std::string out = "parameters fail validation:";
  for (const auto& v : report.violations) out += " [" + v.code + "] " + v.message + ";";
  return out;
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : std::invalid_argument(summarize(report)), report_(std::move(report)) {}

void require_assumption_A(const ModelParams& params, double T, std::size_t n) {
  params.check_domain();
  auto report = validate_assumption_A(params, T, n);
  if (!report.ok()) throw ValidationError(std::move(report));
}

double drift(const ModelParams& p, double x) { return p.a - p.k * x; }

double diffusion_coeff(const ModelParams& p, double x) {
  return x > 0.0 ? p.sigma1 * std::pow(x, p.gamma) : 0.0;
}

double jump_coeff(const ModelParams& p, double x) {
  return x > 0.0 ? p.sigma2 * std::pow(x, 1.0 / p.alpha) : 0.0;
}

}  // namespace acev
