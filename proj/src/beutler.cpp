#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "irrspec/errors.hpp"
#include "irrspec/estimate.hpp"
#include "irrspec/quadrature.hpp"

namespace irrspec {
namespace {

constexpr double kMaxCondition = 1e14;

}  // namespace

BeutlerFit beutler_coefficients(const SamplingScheme& scheme, Interval band, double lambda0,
                                std::size_t n, std::size_t grid_points, double ridge) {
  if (!(band.hi > band.lo)) throw ParameterError("band must satisfy lo < hi");
  if (!band.contains(lambda0)) throw ParameterError("lambda0 must lie in the band");
  if (n == 0) throw ParameterError("at least one coefficient is required");
  if (grid_points < 2) throw ParameterError("the grid needs at least two points");
  if (!(ridge >= 0.0)) throw ParameterError("ridge must be nonnegative");

  BeutlerFit fit;
  fit.band = band;
  fit.lambda0 = lambda0;
  const double step = band.width() / static_cast<double>(grid_points - 1);
  for (double lambda : uniform_grid(band.lo, band.hi, grid_points)) {
    if (std::abs(lambda - lambda0) < step) continue;
    fit.grid.push_back(lambda);
  }
  const auto rows = static_cast<Eigen::Index>(fit.grid.size());
  const auto cols = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd design(rows, cols);
  Eigen::VectorXcd target(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double lambda = fit.grid[static_cast<std::size_t>(i)];
    const std::complex<double> f = spacing_charfn(scheme, lambda);
    std::complex<double> power = 1.0;
    for (Eigen::Index k = 0; k < cols; ++k) {
      power *= f;
      design(i, k) = power;
    }
    target(i) = lambda < lambda0 ? 1.0 : 0.0;
  }

  Eigen::MatrixXcd normal = design.adjoint() * design;
  normal.diagonal().array() += ridge;
  const Eigen::VectorXd eigenvalues =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(normal, Eigen::EigenvaluesOnly)
          .eigenvalues();
  fit.condition = eigenvalues.maxCoeff() / std::max(eigenvalues.minCoeff(), 1e-300);
  if (!(fit.condition < kMaxCondition)) {
    throw NumericalError("normal matrix too ill-conditioned (condition " +
                             std::to_string(fit.condition) + ")",
                         fit.condition);
  }
  const Eigen::VectorXcd c = normal.ldlt().solve(design.adjoint() * target);
  fit.coefficients.assign(c.data(), c.data() + c.size());
  fit.residual = std::sqrt((design * c - target).squaredNorm() / static_cast<double>(rows));
  return fit;
}

double beutler_plugin_distribution(std::span<const double> r_hat,
                                   std::span<const std::complex<double>> coefficients) {
  if (r_hat.size() != coefficients.size()) {
    throw ParameterError("covariance sequence and coefficients differ in length");
  }
  std::complex<double> sum = 0.0;
  for (std::size_t k = 0; k < r_hat.size(); ++k) sum += coefficients[k] * r_hat[k];
  return sum.real();
}

double beutler_error_bound(const BeutlerFit& fit, const SpectrumModel& model) {
  const double energy = quad::trapezoid(
      [&](double l) {
        const double p = model.psd(l);
        return p * p;
      },
      fit.band.lo, fit.band.hi, quad::kDefaultIntervals);
  return fit.residual * std::sqrt(fit.band.width() * energy);
}

}  // namespace irrspec
