#include "irrspec/quadrature.hpp"

#include <gsl/gsl_sf_expint.h>

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "irrspec/errors.hpp"

namespace irrspec::quad {

double trapezoid(const std::function<double(double)>& f, double a, double b,
                 std::size_t intervals) {
  const double h = (b - a) / static_cast<double>(intervals);
  double sum = 0.5 * (f(a) + f(b));
  for (std::size_t k = 1; k < intervals; ++k) {
    sum += f(a + h * static_cast<double>(k));
  }
  return sum * h;
}

double checked_even_trapezoid(const std::function<double(double)>& f,
                              double half_width, std::size_t intervals,
                              double relative_tolerance, double absolute_floor,
                              const char* what) {
  // Half of the symmetric grid: [0, half_width] with intervals/2 steps.
  const std::size_t half = std::max<std::size_t>(intervals / 2, 1);
  const double h = half_width / static_cast<double>(half);
  double sum = 0.5 * (f(0.0) + f(half_width));
  for (std::size_t k = 1; k < half; ++k) sum += f(h * static_cast<double>(k));
  const double coarse = 2.0 * h * sum;

  double midpoints = 0.0;
  for (std::size_t k = 0; k < half; ++k) {
    midpoints += f(h * (static_cast<double>(k) + 0.5));
  }
  const double fine = 0.5 * coarse + h * midpoints;
  const double change = std::abs(fine - coarse);
  if (change > std::max(relative_tolerance * std::abs(fine), absolute_floor)) {
    throw NumericalError(std::string(what) +
                             ": quadrature did not converge under step "
                             "halving (change " +
                             std::to_string(change) + ")",
                         change);
  }
  return fine;
}

double sine_integral(double x) { return gsl_sf_Si(x); }

double cos_over_square_tail(double c, double lower) {
  // Integration by parts: cos(cL)/L - c * (pi/2 - Si(cL)).
  const double cl = c * lower;
  return std::cos(cl) / lower - c * (0.5 * std::numbers::pi - sine_integral(cl));
}

double PanelRule::integrate(const std::function<double(double)>& f) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
  return sum;
}

PanelRule gauss_legendre_panels(const std::vector<double>& breakpoints,
                                std::size_t panels_per_gap) {
  using Rule = boost::math::quadrature::gauss<double, 16>;
  const auto& abscissa = Rule::abscissa();
  const auto& weight = Rule::weights();

  PanelRule rule;
  for (std::size_t g = 0; g + 1 < breakpoints.size(); ++g) {
    const double a = breakpoints[g];
    const double b = breakpoints[g + 1];
    if (!(b > a)) continue;
    const double width = (b - a) / static_cast<double>(panels_per_gap);
    for (std::size_t p = 0; p < panels_per_gap; ++p) {
      const double mid = a + width * (static_cast<double>(p) + 0.5);
      const double half = 0.5 * width;
      // boost stores the non-negative half of a symmetric rule.
      for (std::size_t i = 0; i < abscissa.size(); ++i) {
        const double x = abscissa[i];
        if (x == 0.0) {
          rule.nodes.push_back(mid);
          rule.weights.push_back(half * weight[i]);
          continue;
        }
        rule.nodes.push_back(mid - half * x);
        rule.weights.push_back(half * weight[i]);
        rule.nodes.push_back(mid + half * x);
        rule.weights.push_back(half * weight[i]);
      }
    }
  }
  return rule;
}

}  // namespace irrspec::quad
