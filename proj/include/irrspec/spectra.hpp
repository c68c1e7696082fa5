#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irrspec/interval.hpp"

namespace irrspec {

// Fourier convention used throughout:
//
//   C(t) = integral of psd(lambda) * exp(i lambda t) d lambda,
//   psd(lambda) = (1 / 2 pi) * integral of C(t) * exp(-i lambda t) dt.
//
// lambda is angular frequency (rad per unit time).

// One term of an algebraic tail psd(lambda) ~ coefficient * cos(frequency *
// lambda) / lambda^2, valid for |lambda| beyond the quadrature window.
struct TailTerm {
  double coefficient = 0.0;
  double frequency = 0.0;
};

// A power spectral density together with its covariance function.
//
// Immutable; copies share the underlying callables.
class SpectrumModel {
 public:
  using Function = std::function<double(double)>;

  struct Definition {
    std::string id;
    Function psd;
    Function covariance;
    // psd vanishes for |lambda| > band_edge.
    std::optional<double> band_edge;
    // covariance vanishes for |t| > support_half_width.
    std::optional<double> support_half_width;
    // Half-width of the quadrature window for models without a band.
    double window = 0.0;
    std::size_t window_intervals = 8192;
    // Asymptotic psd beyond the window (models without a band only).
    std::vector<TailTerm> tail;
    // Right derivative of the covariance at 0 and left derivative at the
    // support edge; both enter the tail of products of covariances.
    double slope_at_zero = 0.0;
    double slope_at_support_edge = 0.0;
    // Variance; computed as the integral of psd when absent.
    std::optional<double> variance;
  };

  explicit SpectrumModel(Definition definition);

  const std::string& id() const noexcept { return def_->id; }
  double psd(double lambda) const { return def_->psd(lambda); }
  double covariance(double t) const { return def_->covariance(t); }
  double variance() const noexcept { return variance_; }

  std::optional<Interval> band() const;
  std::optional<Interval> covariance_support() const;
  bool bandlimited() const noexcept { return def_->band_edge.has_value(); }

  // Half-width of the frequency interval integrated numerically.
  double transform_half_width() const noexcept;
  std::size_t transform_intervals() const noexcept;

  std::span<const TailTerm> tail() const noexcept { return def_->tail; }
  // Asymptotic psd used beyond the quadrature window.
  double tail_psd(double lambda) const;

  double covariance_slope_at_zero() const noexcept { return def_->slope_at_zero; }
  double covariance_slope_at_support_edge() const noexcept {
    return def_->slope_at_support_edge;
  }

  // psd and covariance multiplied by `factor` (> 0).
  SpectrumModel scaled(double factor) const;

 private:
  std::shared_ptr<const Definition> def_;
  double variance_ = 0.0;
};

// Spectrum of the sum of two independent processes.
SpectrumModel sum(const SpectrumModel& first, const SpectrumModel& second);

// Member of the class of spectra whose covariance vanishes beyond a.
struct ClassAMember {
  double a = 0.0;
  SpectrumModel base;
  std::optional<SpectrumModel> convolved_with;

  const SpectrumModel& model() const noexcept { return base; }
};

// psd (1 / pi a) (1 - cos(a lambda)) / lambda^2 with covariance
// 1 - |t| / a on |t| <= a. Throws ParameterError unless a > 0.
ClassAMember make_triangle_pair(double a);

// psd of the member convolved with `other`; the covariance is the pointwise
// product, so support and class membership are preserved.
ClassAMember convolve_class_a(const ClassAMember& member,
                              const SpectrumModel& other);

// The two-bump bandlimited density used in the Monte Carlo studies, made
// even by adding its mirror image.
double eval_simulation_psd(double lambda);
SpectrumModel make_simulation_spectrum();

// Fixed-grid trapezoid quadrature of psd(lambda) cos(lambda t) (plus the
// analytic tail contribution for models with an algebraic tail).
double covariance_from_psd(const SpectrumModel& model, double t);

// Integral of psd over the real line.
double integrate_psd(const SpectrumModel& model);

// Covariance at lags 0, T, ..., N T.
std::vector<double> covariance_samples(const SpectrumModel& model, double step,
                                       std::size_t count);

// Shannon reconstruction sum_{|n| <= N} C(nT) sinc(pi (u - nT) / T) from
// samples[n] = C(nT), n = 0..N, of an even covariance.
double sinc_reconstruct(std::span<const double> samples, double step, double u);

// Parses `sim5`, `triangle:a=<x>` and `triangle-conv:a=<x>,other=<id>`.
SpectrumModel parse_spectrum(std::string_view id);

}  // namespace irrspec
