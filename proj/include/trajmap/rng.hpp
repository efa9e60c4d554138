#ifndef TRAJMAP_RNG_HPP
#define TRAJMAP_RNG_HPP

#include <cstdint>

namespace trajmap {

/**
 * Counter-based 64-bit generator: draw n of a stream with key k is
 * splitmix64_mix(k + (n + 1)·0x9E3779B97F4A7C15). Results depend only on the
 * key and the counter, so they are identical on every platform and any draw
 * can be reproduced without replaying the stream.
 */
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  /// Independent stream for sub-task `id` (e.g. one simulation run).
  CounterRng substream(std::uint64_t id) const;

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next();
  /// Uniform integer in [0, n); n > 0. Unbiased (rejection sampling).
  std::uint64_t below(std::uint64_t n);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box–Muller (one value per two draws).
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

}  // namespace trajmap

#endif  // TRAJMAP_RNG_HPP
