#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "irrspec/spectra.hpp"

namespace irrspec {

// Process values observed at (irregular) sample times.
struct SampledPath {
  std::vector<double> times;
  std::vector<double> values;
  std::string model_id;
  std::string scheme_id;
  std::uint64_t seed = 0;
  // Diagonal jitter added to the covariance matrix (0 when none was needed).
  double jitter = 0.0;
};

inline constexpr std::size_t kMaxExactPoints = 4000;

// Exact zero-mean Gaussian draw with covariance C(t_j - t_k), via Cholesky
// factorization. Jitter 1e-10 C(0) is added on failure and escalated by 10x
// at most three times. Throws ParameterError for more than kMaxExactPoints
// times or unsorted times, NumericalError when factorization still fails.
SampledPath sample_gaussian_path(const SpectrumModel& model, std::span<const double> times,
                                 std::uint64_t seed);

// Random-phase superposition of `components` sinusoids with frequencies at
// the midpoints of equal strata of [0, band edge]; stratum j carries variance
// equal to the psd mass of the stratum and its mirror image. Throws
// UnsupportedError when the model has no band.
SampledPath sample_path_spectral(const SpectrumModel& model, std::span<const double> times,
                                 std::size_t components, std::uint64_t seed);

}  // namespace irrspec
