#ifndef PDFP_RNG_HPP_
#define PDFP_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>

#include "pdfp/vec.hpp"

namespace pdfp {

// Counter-based deterministic generator. The stream is a pure function of
// (seed, draw index), so identical seeds reproduce identical data across
// runs and across language ports. The exact protocol:
//
//   draw(seed, i) = mix64(seed + (i+1) * 0x9E3779B97F4A7C15)   (wrapping u64)
//   mix64(z): z ^= z>>30; z *= 0xBF58476D1CE4E5B9;
//             z ^= z>>27; z *= 0x94D049BB133111EB; z ^= z>>31
//
//   uniform(i)       = draw(i) >> 11, scaled by 2^-53   (in [0,1))
//   normals come in Box-Muller pairs from uniforms (2j, 2j+1):
//     r = sqrt(-2 ln(1 - u1)),  z0 = r cos(2 pi u2),  z1 = r sin(2 pi u2)
//   normal() returns z0 then z1, consuming the pair lazily.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  Vec normal_vec(std::size_t n) {
    Vec v(n);
    for (auto& x : v) x = normal();
    return v;
  }

  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    return n == 0 ? 0 : static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pdfp

#endif  // PDFP_RNG_HPP_
