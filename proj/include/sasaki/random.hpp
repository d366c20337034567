#pragma once

// Seeded sampling with a bit-exact, library-independent mapping from the
// 64-bit engine to doubles (std distributions are implementation-defined).

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>

namespace sasaki {

inline constexpr std::uint64_t kDefaultSeed = 0x5A5A;

/// SASAKI_SEED if set and parseable, otherwise `fallback`.
inline std::uint64_t seed_from_env(std::uint64_t fallback = kDefaultSeed) {
  if (const char* env = std::getenv("SASAKI_SEED")) {
    try {
      return std::stoull(env, nullptr, 0);
    } catch (...) {
      return fallback;
    }
  }
  return fallback;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sasaki
