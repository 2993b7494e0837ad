#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace gpcq {

inline constexpr double kPi = 3.14159265358979323846;

// Counter-based pseudo-random stream: value i of stream `seed` is a pure
// function of (seed, i) built on the splitmix64 finalizer, so any element can
// be drawn independently of the others and the sequence is reproducible
// across platforms.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t counter) const {
    std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(std::uint64_t counter, double lo, double hi) const {
    return lo + (hi - lo) * uniform(counter);
  }

  // Standard complex Gaussian with E|z|^2 = 1 (Box-Muller).
  std::complex<double> gaussian(std::uint64_t counter) const {
    const double u1 = uniform(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    const double rad = std::sqrt(-std::log1p(-u1));
    const double ang = 2.0 * kPi * u2;
    return {rad * std::cos(ang), rad * std::sin(ang)};
  }

 private:
  std::uint64_t seed_;
};

}  // namespace gpcq
