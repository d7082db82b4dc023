#ifndef RBSC_RNG_HPP
#define RBSC_RNG_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

namespace rbsc {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// xoshiro256** seeded via splitmix64. Self-contained so that generated
// instances are byte-identical across standard libraries (std distributions
// are implementation defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : s_) {
      x = splitmix64(x);
      word = x ? x : 0x2545f4914f6cdd1dULL;
    }
  }

  std::uint64_t next() {
    auto rotl = [](std::uint64_t v, int k) {
      return (v << k) | (v >> (64 - k));
    };
    std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, n), unbiased by rejection.
  std::uint32_t below(std::uint32_t n) {
    if (n <= 1) return 0;
    std::uint64_t threshold = (~std::uint64_t{0} / n) * n;
    std::uint64_t v = next();
    while (v >= threshold) v = next();
    return static_cast<std::uint32_t>(v % n);
  }

  double unit() { return (next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  // Independent substream; deterministic function of (seed path, stream id).
  Rng fork(std::uint64_t stream) const {
    return Rng(splitmix64(s_[0] ^ splitmix64(stream + 0x51ed2701ULL)));
  }

  // k distinct values from [0, n), sorted.
  std::vector<int> sample_without_replacement(int n, int k) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    if (k > n) k = n;
    for (int i = 0; i < k; ++i) {
      int j = i + static_cast<int>(below(static_cast<std::uint32_t>(n - i)));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

 private:
  std::uint64_t s_[4];
};

}  // namespace rbsc

#endif  // RBSC_RNG_HPP
