#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace irrspec {

// Roles of the independent random streams used by one Monte Carlo run.
enum class StreamRole : std::uint64_t {
  kTimes = 1,
  kValues = 2,
  kAuxiliary = 3,
};

// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Seed derivation contract.
//
// A generator state is a pure function of (master seed, key path, role):
//
//   s_0 = splitmix64(master)
//   s_{i+1} = splitmix64(s_i ^ (key_i + 0x9e3779b97f4a7c15 * (i + 1)))
//   seed = splitmix64(s_k ^ (role * 0xd1b54a32d192ed03))
//
// Keys are typically (sweep index, run index). Since the mapping is
// counter-based, runs can be evaluated in any order or in parallel and still
// receive the same streams.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> keys,
                          StreamRole role) noexcept;

// Random source with variate generators whose output is fixed by this code
// (not by the standard library's distribution implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1].
  double uniform_open_zero() noexcept { return 1.0 - uniform(); }

  // Exponential with the given mean, by inverse CDF.
  double exponential(double mean) noexcept;

  // Standard normal, Box-Muller with the second variate cached.
  double normal() noexcept;

  // Gamma(shape, scale) via Marsaglia-Tsang; shape < 1 uses the boost
  // U^{1/shape} trick.
  double gamma(double shape, double scale) noexcept;

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace irrspec
