#ifndef ACEV_STABLE_RNG_HPP
#define ACEV_STABLE_RNG_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace acev {

// Philox4x64-10 counter-based generator. The 128-bit key is (seed, stream_id),
// so every (seed, stream_id) pair owns a disjoint counter space and streams
// never overlap regardless of how many values each one consumes.
// Satisfies UniformRandomBitGenerator.
class Philox4x64 {
public:
  using result_type = std::uint64_t;

  Philox4x64(std::uint64_t seed, std::uint64_t stream_id);

  result_type operator()();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  // Raw block function, exposed for known-answer tests.
  static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> counter,
                                            std::array<std::uint64_t, 2> key);

private:
  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_{};
  std::array<std::uint64_t, 4> buffer_{};
  unsigned used_ = 4;
};

// Per-stream source of the primitive variates used by the samplers.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : engine_(seed, stream_id) {}

  // Uniform on the open interval (0, 1).
  double uniform_open();
  double standard_normal() { return normal_(engine_); }
  double standard_exponential();

private:
  Philox4x64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

enum class StableNormalization {
  // Laplace exponent m^alpha Gamma(2-alpha) / (alpha (alpha-1)), i.e. the
  // compensated process with Levy measure x^{-1-alpha} dx on (0, inf).
  levy_measure,
  // Totally skewed stable law with scale dt^{1/alpha} in the S1
  // parametrisation (skewness 1, location 0).
  // Laplace exponent m^alpha / sin(pi (alpha-1) / 2).
  unit_scale,
};

class StableLawSpec {
public:
  StableLawSpec(double alpha, StableNormalization normalization, double dt);

  double alpha() const { return alpha_; }
  StableNormalization normalization() const { return normalization_; }
  double dt() const { return dt_; }

  StableLawSpec with_dt(double dt) const { return {alpha_, normalization_, dt}; }

  // Scale applied to a standard S1(alpha, 1, 1) variate to get Z_dt.
  double scale() const { return scale_; }

  // psi(m) with E[exp(-m Z_t)] = exp(t psi(m)), m >= 0.
  double laplace_exponent(double m) const;

private:
  double alpha_;
  StableNormalization normalization_;
  double dt_;
  double scale_;
};

// Per-unit-time scale c with c^alpha / sin(pi(alpha-1)/2) equal to the
// requested Laplace constant.
double unit_time_scale(double alpha, StableNormalization normalization);

// One standard totally skewed (beta = 1) alpha-stable draw, S1 parametrisation,
// unit scale, zero location (hence zero mean for alpha in (1, 2)).
double standard_skewed_stable(double alpha, RngStream& rng);

std::vector<double> sample_brownian_increments(std::size_t n, double dt, RngStream& rng);
std::vector<double> sample_stable_increments(const StableLawSpec& spec, std::size_t n,
                                             RngStream& rng);

// Pairwise sums of consecutive entries; throws on odd length.
std::vector<double> merge2(std::span<const double> x);

struct IncrementGrid {
  std::size_t n = 0;
  double dt = 0.0;
  std::vector<double> dW;
  std::vector<double> dZ;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

// Fresh grid keyed by (seed, stream_id). Brownian increments are drawn
// first, then stable increments; with `draw_jumps == false` dZ is all zeros
// and the Brownian part is unchanged.
IncrementGrid make_increment_grid(std::uint64_t seed, std::uint64_t stream_id, std::size_t n,
                                  const StableLawSpec& spec, bool draw_jumps = true);

struct CoupledGrids {
  IncrementGrid fine;    // 2n steps of size spec.dt()
  IncrementGrid coarse;  // n steps of size 2 spec.dt(), merge2 of fine
};

// `fine_spec.dt()` is the fine step.
CoupledGrids coupled_grids(std::uint64_t seed, std::uint64_t stream_id, std::size_t n,
                           const StableLawSpec& fine_spec, bool draw_jumps = true);

}  // namespace acev

#endif  // ACEV_STABLE_RNG_HPP
