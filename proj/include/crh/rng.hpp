#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace crh {

// SplitMix64 mix; used to derive independent sub-seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Seedable generator built on MT19937-64. The raw stream is fixed by the
// standard, and every derived draw below is computed from raw 64-bit words
// with explicit arithmetic, so identical seeds reproduce identical results
// on any conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_raw() { return gen_(); }

  // Uniform in [0,1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n) via 128-bit multiply-shift.
  std::uint64_t bounded(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(gen_()) * n) >> 64);
  }

  // Standard normal via Box-Muller; values come out in pairs.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // k distinct values from [0, n), returned ascending. Partial Fisher-Yates.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t t = 0; t < k && t + 1 < n; ++t) {
      std::size_t j = t + static_cast<std::size_t>(bounded(n - t));
      std::swap(idx[t], idx[j]);
    }
    idx.resize(std::min(n, k));
    std::sort(idx.begin(), idx.end());
    return idx;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace crh
