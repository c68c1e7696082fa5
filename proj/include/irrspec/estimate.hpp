#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "irrspec/interval.hpp"
#include "irrspec/renewal.hpp"
#include "irrspec/sampling.hpp"
#include "irrspec/simulate.hpp"
#include "irrspec/spectra.hpp"

namespace irrspec {

// w(x) = (1 + cos(pi x)) / 2 on [-1, 1], zero elsewhere.
double raised_cosine_kernel(double x) noexcept;

struct EstimatorConfig {
  std::function<double(double)> kernel = raised_cosine_kernel;
  double bandwidth = 1.0 / 50.0;  // b_n
  double beta = 1.0;              // true mean intensity of the scheme
  std::vector<double> grid;
};

// n points spaced evenly over [lo, hi], both ends included.
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

// Covariance-averaging spectral estimate
//
//   phi_hat(lambda) = 1 / (pi beta n) sum_{j < k} X_j X_k w(b (t_k - t_j))
//                     cos(lambda (t_k - t_j))
//
// over config.grid. Only pairs with b (t_k - t_j) <= 1 are visited. Values are
// returned as computed, including negative ones. Throws ParameterError for
// paths shorter than 2, beta <= 0 or bandwidth <= 0.
std::vector<double> masry_estimate(const SampledPath& path, const EstimatorConfig& config);

struct CovarianceSequenceEstimate {
  std::vector<double> mean;            // r_hat(0..max_lag)
  std::vector<double> standard_error;  // between-run standard error
  std::size_t runs = 0;
};

// r_hat(n) averages X(t_{m+n}) X(t_m) over m within each path, then over
// paths. Throws ParameterError for an empty ensemble or max_lag >= length.
CovarianceSequenceEstimate empirical_covariance_sequence(std::span<const SampledPath> paths,
                                                         std::size_t max_lag);

// Second-order measure of Z(B) = sum of X(t_i) over t_i in B: an atom
// beta C(0) at the origin plus beta C(u) h(|u|) du away from it. Schemes with
// a spacing density give a density table on the renewal grid; atomic schemes
// give off-origin atoms instead.
struct CompoundMeasureView {
  double atom_at_zero = 0.0;
  double step = 0.0;
  double min_spacing = 0.0;
  std::vector<double> density;      // at u = k step, k >= 0
  std::vector<SpacingAtom> atoms;   // u > 0; mirror images implied
  std::string scheme_id;
  std::string model_id;
  double density_at(double u) const;
};

CompoundMeasureView compound_covariance_view(const SpectrumModel& model,
                                             const SamplingScheme& scheme);

// Spectral density of the compound measure,
//   phi_z(lambda) = beta C(0) / (2 pi) + (1 / pi) integral over (0, U] of
//                   beta C(u) h(u) cos(lambda u) du.
double compound_view_transform(const CompoundMeasureView& view, double lambda);

// Right-hand side of the integral equation linking phi_z and phi.
struct IntegralEquationTerms {
  // beta^2 phi(lambda) + integral of phi(lambda - w) phi_c(w) dw with phi_c
  // the cosine transform of f_c over the renewal window.
  double continuous = 0.0;
  // Contribution beta C(0) / (2 pi) of the atom of the reduced covariance
  // measure.
  double atom = 0.0;
  double total() const noexcept { return continuous + atom; }
};

// Needs a bandlimited model and a scheme with a spacing density. Throws
// NumericalError when f_c has not decayed at the end of the renewal window.
IntegralEquationTerms masry_integral_rhs(const SpectrumModel& model,
                                         const SamplingScheme& scheme, double lambda);

struct BeutlerFit {
  std::vector<std::complex<double>> coefficients;  // c_1 .. c_n
  double residual = 0.0;                           // rms over the grid
  std::vector<double> grid;
  double condition = 0.0;                          // of the normal matrix
  Interval band;
  double lambda0 = 0.0;
};

inline constexpr std::size_t kBeutlerGridPoints = 512;
inline constexpr double kBeutlerRidge = 1e-8;

// Regularized least-squares fit of the indicator of {lambda < lambda0} on
// the band by sum_k c_k f'(lambda)^k, k = 1..n, on a uniform grid of
// `grid_points` nodes with nodes closer than one step to lambda0 dropped.
BeutlerFit beutler_coefficients(const SamplingScheme& scheme, Interval band, double lambda0,
                                std::size_t n, std::size_t grid_points = kBeutlerGridPoints,
                                double ridge = kBeutlerRidge);

// Re sum_k c_k r_hat(k) with r_hat indexed from lag 1 (r_hat[k - 1] = r(k)).
double beutler_plugin_distribution(std::span<const double> r_hat,
                                   std::span<const std::complex<double>> coefficients);

// Cauchy-Schwarz bound on |plug-in - spectral mass below lambda0| for a
// model whose psd vanishes outside the band: residual * sqrt(|band| *
// integral of psd^2 over the band).
double beutler_error_bound(const BeutlerFit& fit, const SpectrumModel& model);

}  // namespace irrspec
