#ifndef ACEV_PARALLEL_HPP
#define ACEV_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace acev {

std::size_t default_workers();

// Count, mean and centred sum of squares, merged with Chan's update.
struct MeanAccumulator {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++count;
    const double delta = v - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (v - mean);
  }

  void merge(const MeanAccumulator& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(count + o.count);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.count) / total;
    m2 += o.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(o.count) / total;
    count += o.count;
  }

  double sample_variance() const {
    return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
  }
  double stderr_of_mean() const {
    return count > 1 ? std::sqrt(sample_variance() / static_cast<double>(count)) : 0.0;
  }
};

// Index chunk size used by every Monte Carlo reduction. Fixed so that the
// reduction tree, and hence every floating-point result, does not depend on
// the worker count.
inline constexpr std::size_t kReductionChunk = 1024;

// Splits [0, count) into fixed chunks, evaluates `body(begin, end, acc)` for
// each chunk on up to `workers` threads, then merges the per-chunk
// accumulators in chunk order with `Acc::merge`.
template <class Acc, class Body>
Acc chunked_reduce(std::size_t count, std::size_t workers, Body body,
                   std::size_t chunk = kReductionChunk) {
  const std::size_t n_chunks = (count + chunk - 1) / chunk;
  std::vector<Acc> partial(n_chunks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        const std::size_t begin = c * chunk;
        body(begin, std::min(count, begin + chunk), partial[c]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n_chunks;
        return;
      }
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n_chunks, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  Acc total{};
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace acev

#endif  // ACEV_PARALLEL_HPP
