#include "acev/stable_rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace acev {

namespace {

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kPhiloxW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kPhiloxW1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  __extension__ using u128 = unsigned __int128;
  const u128 p = static_cast<u128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace

Philox4x64::Philox4x64(std::uint64_t seed, std::uint64_t stream_id) : key_{seed, stream_id} {}

std::array<std::uint64_t, 4> Philox4x64::block(std::array<std::uint64_t, 4> ctr,
                                               std::array<std::uint64_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

Philox4x64::result_type Philox4x64::operator()() {
  if (used_ == 4) {
    buffer_ = block(counter_, key_);
    // 256-bit counter increment
    for (auto& word : counter_) {
      if (++word != 0) break;
    }
    used_ = 0;
  }
  return buffer_[used_++];
}

double RngStream::uniform_open() {
  // 53 random bits centred in their cell: never 0, never 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::standard_exponential() { return -std::log(uniform_open()); }

double unit_time_scale(double alpha, StableNormalization normalization) {
  switch (normalization) {
    case StableNormalization::unit_scale:
      return 1.0;
    case StableNormalization::levy_measure: {
      const double target = std::tgamma(2.0 - alpha) / (alpha * (alpha - 1.0));
      const double unit = 1.0 / std::sin(std::numbers::pi * (alpha - 1.0) / 2.0);
      return std::pow(target / unit, 1.0 / alpha);
    }
  }
  throw std::invalid_argument("unknown stable normalization");
}

StableLawSpec::StableLawSpec(double alpha, StableNormalization normalization, double dt)
    : alpha_(alpha), normalization_(normalization), dt_(dt) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw std::invalid_argument("stable index alpha must lie in (1, 2), got " +
                                std::to_string(alpha));
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("time step must be positive, got " + std::to_string(dt));
  }
  scale_ = unit_time_scale(alpha, normalization) * std::pow(dt, 1.0 / alpha);
}

double StableLawSpec::laplace_exponent(double m) const {
  // Unit-scale exponent m^alpha / sin(pi(alpha-1)/2), evaluated at the scaled argument.
  const double s = unit_time_scale(alpha_, normalization_);
  return std::pow(s * m, alpha_) / std::sin(std::numbers::pi * (alpha_ - 1.0) / 2.0);
}

namespace {

// Chambers-Mallows-Stuck with beta = 1 (Weron's form for alpha != 1), with the
// alpha-only constants hoisted out of the per-draw work.
struct SkewedStableCms {
  explicit SkewedStableCms(double alpha) : alpha(alpha) {
    const double t = std::tan(std::numbers::pi / 2.0 * alpha);
    shift = std::atan(t) / alpha;
    prefactor = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
    inv_alpha = 1.0 / alpha;
    tail_exponent = (1.0 - alpha) / alpha;
  }

  double operator()(RngStream& rng) const {
    const double v = std::numbers::pi * (rng.uniform_open() - 0.5);
    const double w = rng.standard_exponential();
    const double shifted = alpha * (v + shift);
    return prefactor * std::sin(shifted) / std::pow(std::cos(v), inv_alpha) *
           std::pow(std::cos(v - shifted) / w, tail_exponent);
  }

  double alpha;
  double shift;
  double prefactor;
  double inv_alpha;
  double tail_exponent;
};

}  // namespace

double standard_skewed_stable(double alpha, RngStream& rng) { return SkewedStableCms(alpha)(rng); }

std::vector<double> sample_brownian_increments(std::size_t n, double dt, RngStream& rng) {
  if (n == 0) throw std::invalid_argument("increment count must be at least 1");
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const double sd = std::sqrt(dt);
  std::vector<double> out(n);
  for (auto& v : out) v = sd * rng.standard_normal();
  return out;
}

std::vector<double> sample_stable_increments(const StableLawSpec& spec, std::size_t n,
                                             RngStream& rng) {
  if (n == 0) throw std::invalid_argument("increment count must be at least 1");
  const double scale = spec.scale();
  const SkewedStableCms draw(spec.alpha());
  std::vector<double> out(n);
  for (auto& v : out) v = scale * draw(rng);
  return out;
}

std::vector<double> merge2(std::span<const double> x) {
  if (x.size() % 2 != 0) {
    throw std::invalid_argument("merge2 needs an even number of entries, got " +
                                std::to_string(x.size()));
  }
  std::vector<double> y(x.size() / 2);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[2 * i] + x[2 * i + 1];
  return y;
}

IncrementGrid make_increment_grid(std::uint64_t seed, std::uint64_t stream_id, std::size_t n,
                                  const StableLawSpec& spec, bool draw_jumps) {
  RngStream rng(seed, stream_id);
  IncrementGrid grid;
  grid.n = n;
  grid.dt = spec.dt();
  grid.seed = seed;
  grid.stream_id = stream_id;
  grid.dW = sample_brownian_increments(n, spec.dt(), rng);
  grid.dZ = draw_jumps ? sample_stable_increments(spec, n, rng) : std::vector<double>(n, 0.0);
  return grid;
}

CoupledGrids coupled_grids(std::uint64_t seed, std::uint64_t stream_id, std::size_t n,
                           const StableLawSpec& fine_spec, bool draw_jumps) {
  if (n == 0) throw std::invalid_argument("coarse step count must be at least 1");
  CoupledGrids out;
  out.fine = make_increment_grid(seed, stream_id, 2 * n, fine_spec, draw_jumps);
  out.coarse.n = n;
  out.coarse.dt = 2.0 * fine_spec.dt();
  out.coarse.seed = seed;
  out.coarse.stream_id = stream_id;
  out.coarse.dW = merge2(out.fine.dW);
  out.coarse.dZ = merge2(out.fine.dZ);
  return out;
}

}  // namespace acev
