#include "irrspec/rng.hpp"

#include <cmath>
#include <numbers>

namespace irrspec {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> keys,
                          StreamRole role) noexcept {
  std::uint64_t state = splitmix64(master);
  std::uint64_t i = 0;
  for (std::uint64_t key : keys) {
    ++i;
    state = splitmix64(state ^ (key + 0x9e3779b97f4a7c15ULL * i));
  }
  return splitmix64(state ^
                    (static_cast<std::uint64_t>(role) * 0xd1b54a32d192ed03ULL));
}

double Rng::exponential(double mean) noexcept {
  return -mean * std::log(uniform_open_zero());
}

double Rng::normal() noexcept {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform_open_zero()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  cached_normal_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

double Rng::gamma(double shape, double scale) noexcept {
  if (shape < 1.0) {
    const double boosted = gamma(shape + 1.0, 1.0);
    return scale * boosted * std::pow(uniform_open_zero(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open_zero();
    if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return scale * d * v;
    }
  }
}

}  // namespace irrspec
