#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bifuse {

/// splitmix64 mixer, used to derive substream seeds.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic random stream: an mt19937_64 engine (fixed by the C++
/// standard) with hand-rolled uniform/normal transforms, so the produced
/// sequence does not depend on the standard library's distribution
/// implementations. Substreams are derived as mix64(seed ^ mix64(stream)),
/// one stream per independently drawn block of values.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  static Rng substream(uint64_t seed, uint64_t stream) {
    return Rng(mix64(seed ^ mix64(stream)));
  }

  uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, m).
  int uniform_int(int m) {
    int v = static_cast<int>(uniform01() * m);
    return v >= m ? m - 1 : v;
  }

  /// Standard normal via Box-Muller; the paired deviate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace bifuse
