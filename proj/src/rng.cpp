#include "ogt/rng.hpp"

#include <algorithm>
#include <unordered_set>

namespace ogt {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t stable_hash(std::string_view text) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(mix64(seed + kGolden) ^ mix64(stream * kGolden + 0x632BE59BD9B4E019ULL)) {}

Rng::result_type Rng::operator()() noexcept {
  const std::uint64_t c = counter_++;
  return mix64(mix64(key_ + c * kGolden) ^ key_);
}

Rng Rng::derive(std::string_view stage, std::uint64_t index) const noexcept {
  return Rng(key_, mix64(stable_hash(stage)) ^ (index * 0xD1B54A32D192ED03ULL));
}

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
  // Lemire's multiply-shift with rejection.
  std::uint64_t x = (*this)();
  __uint128_t m = static_cast<__uint128_t>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      x = (*this)();
      m = static_cast<__uint128_t>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

std::vector<int> sample_sorted_subset(int n, int q, Rng& rng) {
  std::vector<int> out;
  if (q <= 0 || n <= 0) return out;
  if (q >= n) {
    out.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i;
    return out;
  }
  std::unordered_set<int> chosen;
  chosen.reserve(static_cast<std::size_t>(q) * 2);
  for (int j = n - q; j < n; ++j) {
    const int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(j) + 1));
    if (!chosen.insert(r).second) chosen.insert(j);
  }
  out.assign(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> sample_sorted_subset(const std::vector<int>& pool, int q, Rng& rng) {
  std::vector<int> idx = sample_sorted_subset(static_cast<int>(pool.size()), q, rng);
  for (int& i : idx) i = pool[static_cast<std::size_t>(i)];
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace ogt
