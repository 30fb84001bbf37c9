#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace sra {

/// Derives an independent child seed from (master, purpose tag, index).
///
/// The tag is hashed with 64-bit FNV-1a and the three words are combined
/// through the SplitMix64 finalizer, so the result depends only on the
/// arguments and never on call order.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                          std::uint64_t index = 0);

/// SplitMix64 output function (Steele, Lea & Flood).
std::uint64_t splitmix64(std::uint64_t x);

/// Seedable generator built on std::mt19937_64, whose output sequence is
/// fixed by the C++ standard. Distributions are implemented here rather
/// than taken from <random>, because the standard library's distribution
/// algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform();

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound), bound > 0. Rejection sampling, unbiased.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal via the Marsaglia polar method.
  double normal();

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sra
