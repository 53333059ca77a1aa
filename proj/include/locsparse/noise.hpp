#ifndef LOCSPARSE_NOISE_HPP_
#define LOCSPARSE_NOISE_HPP_

#include <cmath>
#include <cstdint>
#include <random>

#include "locsparse/types.hpp"

namespace locsparse {

// Gaussian deviates from an explicit Box-Muller transform over
// std::mt19937_64, so a given 64-bit seed reproduces the same stream on
// every platform (std::normal_distribution is implementation-defined).
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    spare_ = radius * std::sin(two_pi * u2);
    have_spare_ = true;
    return radius * std::cos(two_pi * u2);
  }

 private:
  double uniform01() {
    return (rng_() >> 11) * 0x1.0p-53;  // 53-bit mantissa in [0,1)
  }

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// W + eta, eta i.i.d. N(0, sigma^2), column-major entry order.
inline DataMatrix add_gaussian_noise(const DataMatrix& w, double sigma,
                                     std::uint64_t seed) {
  require(sigma >= 0.0, "add_gaussian_noise: sigma must be >= 0");
  DataMatrix out = w;
  if (sigma == 0.0) return out;
  GaussianStream stream(seed);
  double* data = out.values.data();
  for (Index k = 0; k < out.values.size(); ++k)
    data[k] += sigma * stream.next();
  return out;
}

}  // namespace locsparse

#endif  // LOCSPARSE_NOISE_HPP_
