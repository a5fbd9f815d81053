#pragma once

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

namespace ogt {

/// Stable 64-bit FNV-1a hash; used to name RNG streams.
std::uint64_t stable_hash(std::string_view text) noexcept;

/// Counter-based generator: the i-th output is a fixed mixing function of
/// (key, i), so streams can be split without shared state.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept;

  /// Independent child stream keyed by (this key, stage name, index).
  Rng derive(std::string_view stage, std::uint64_t index = 0) const noexcept;

  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept;
  /// Uniform double in [0, 1).
  double uniform01() noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Sorted uniform q-subset of {0, ..., n-1} (Floyd's algorithm).
std::vector<int> sample_sorted_subset(int n, int q, Rng& rng);

/// Sorted uniform q-subset of the given pool.
std::vector<int> sample_sorted_subset(const std::vector<int>& pool, int q, Rng& rng);

}  // namespace ogt
