#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace irrspec::quad {

// Default node count for transforms between densities and covariances.
inline constexpr std::size_t kDefaultIntervals = 8192;

// Composite trapezoid rule of f over [a, b] with `intervals` equal steps.
double trapezoid(const std::function<double(double)>& f, double a, double b,
                 std::size_t intervals);

// Integral of an even function over [-half_width, half_width] using
// `intervals` steps across the full interval, then again with the step
// halved. Returns the refined value and throws NumericalError when the two
// differ by more than max(relative_tolerance * |value|, absolute_floor).
double checked_even_trapezoid(const std::function<double(double)>& f,
                              double half_width, std::size_t intervals,
                              double relative_tolerance, double absolute_floor,
                              const char* what);

// Si(x) = integral of sin(t)/t over [0, x].
double sine_integral(double x);

// Integral of cos(c*x)/x^2 over [lower, infinity), lower > 0, c >= 0.
double cos_over_square_tail(double c, double lower);

// Gauss-Legendre rule assembled from equal panels between consecutive
// breakpoints (each gap split into `panels_per_gap` panels of 16 nodes).
struct PanelRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  double integrate(const std::function<double(double)>& f) const;
};

PanelRule gauss_legendre_panels(const std::vector<double>& breakpoints,
                                std::size_t panels_per_gap);

}  // namespace irrspec::quad
