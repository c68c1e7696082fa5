#include "irrspec/simulate.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "irrspec/errors.hpp"
#include "irrspec/quadrature.hpp"
#include "irrspec/rng.hpp"

namespace irrspec {
namespace {

void check_times(std::span<const double> times) {
  if (times.empty()) throw ParameterError("at least one sample time is required");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k])) throw ParameterError("sample times must be finite");
    if (k > 0 && !(times[k] > times[k - 1])) {
      throw ParameterError("sample times must be strictly increasing");
    }
  }
}

SampledPath make_path(const SpectrumModel& model, std::span<const double> times,
                      std::uint64_t seed) {
  SampledPath path;
  path.times.assign(times.begin(), times.end());
  path.model_id = model.id();
  path.seed = seed;
  return path;
}

}  // namespace

SampledPath sample_gaussian_path(const SpectrumModel& model, std::span<const double> times,
                                 std::uint64_t seed) {
  check_times(times);
  if (times.size() > kMaxExactPoints) {
    throw ParameterError("exact synthesis is limited to " + std::to_string(kMaxExactPoints) +
                         " points; use the spectral method");
  }
  const auto n = static_cast<Eigen::Index>(times.size());
  const double c0 = model.covariance(0.0);
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    gram(j, j) = c0;
    for (Eigen::Index k = 0; k < j; ++k) {
      const double c = model.covariance(times[static_cast<std::size_t>(j)] -
                                        times[static_cast<std::size_t>(k)]);
      gram(j, k) = c;
      gram(k, j) = c;
    }
  }

  SampledPath path = make_path(model, times, seed);
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  double jitter = 0.0;
  for (int attempt = 0; llt.info() != Eigen::Success; ++attempt) {
    if (attempt == 4) {
      const double min_eigenvalue =
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram, Eigen::EigenvaluesOnly)
              .eigenvalues()
              .minCoeff();
      throw NumericalError("covariance matrix not positive definite after jitter " +
                               std::to_string(jitter) + "; minimum eigenvalue " +
                               std::to_string(min_eigenvalue),
                           min_eigenvalue);
    }
    jitter = attempt == 0 ? 1e-10 * c0 : jitter * 10.0;
    Eigen::MatrixXd jittered = gram;
    jittered.diagonal().array() += jitter;
    llt.compute(jittered);
  }
  path.jitter = jitter;

  Rng rng(seed);
  Eigen::VectorXd z(n);
  for (Eigen::Index k = 0; k < n; ++k) z(k) = rng.normal();
  const Eigen::VectorXd x = llt.matrixL() * z;
  path.values.assign(x.data(), x.data() + n);
  return path;
}

SampledPath sample_path_spectral(const SpectrumModel& model, std::span<const double> times,
                                 std::size_t components, std::uint64_t seed) {
  check_times(times);
  const auto band = model.band();
  if (!band) throw UnsupportedError("spectral synthesis needs a bandlimited model");
  if (components == 0) throw ParameterError("spectral synthesis needs at least one component");

  const double edge = band->hi;
  const double width = edge / static_cast<double>(components);
  std::vector<double> frequency(components);
  std::vector<double> amplitude(components);
  for (std::size_t j = 0; j < components; ++j) {
    const double lo = width * static_cast<double>(j);
    frequency[j] = lo + 0.5 * width;
    const double mass =
        2.0 * quad::trapezoid([&](double l) { return model.psd(l); }, lo, lo + width, 64);
    amplitude[j] = std::sqrt(std::max(mass, 0.0));
  }

  Rng rng(seed);
  std::vector<double> a(components);
  std::vector<double> b(components);
  for (std::size_t j = 0; j < components; ++j) {
    a[j] = rng.normal();
    b[j] = rng.normal();
  }
  SampledPath path = make_path(model, times, seed);
  path.values.resize(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    double x = 0.0;
    for (std::size_t j = 0; j < components; ++j) {
      const double phase = frequency[j] * times[k];
      x += amplitude[j] * (a[j] * std::cos(phase) + b[j] * std::sin(phase));
    }
    path.values[k] = x;
  }
  return path;
}

}  // namespace irrspec
