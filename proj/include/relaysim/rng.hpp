#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace relaysim {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Deterministic random stream. All variate mappings are done by hand rather
/// than through std::*_distribution, whose output is implementation-defined;
/// identical seeds must yield bit-identical sequences everywhere.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  /// Stream for one Monte Carlo trial. Derivation depends only on
  /// (master_seed, trial_index), never on worker assignment.
  static RandomStream for_trial(std::uint64_t master_seed, std::uint64_t trial_index) {
    return RandomStream(splitmix64(master_seed) ^
                        splitmix64(trial_index * 0x9E3779B97F4A7C15ULL + 0x1234567));
  }

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Exponential with the given mean, via inverse CDF of a uniform on (0, 1].
  double exponential(double mean) {
    const double u = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    return -mean * std::log(u);
  }

  double uniform_range(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Unbiased integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = gen_();
    while (v >= limit) v = gen_();
    return v % n;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace relaysim
