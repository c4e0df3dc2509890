#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace qchaos {

namespace detail {
/// splitmix64 finalizer. Good avalanche behaviour, cheap, and easy to
/// reproduce in other languages when cross-checking fixtures.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Deterministic counter-based random stream.
///
/// Every Monte-Carlo sample owns an independent stream derived from
/// (master_seed, sample_index), so results are bit-identical regardless of
/// how samples are scheduled. Gaussian variates use an explicit Box-Muller
/// transform rather than std::normal_distribution, whose output is
/// implementation-defined.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(detail::mix64(seed)) {}

  static RandomStream for_sample(std::uint64_t master_seed,
                                 std::uint64_t sample_index) {
    return RandomStream(detail::mix64(master_seed) ^
                        detail::mix64(sample_index + 0x5851F42D4C957F2DULL));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform phase in [0, 2*pi).
  double uniform_phase() { return 2.0 * std::numbers::pi * uniform(); }

  /// Standard normal variate (Box-Muller, spare cached).
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // 1 - uniform() lies in (0, 1], keeping the log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qchaos
