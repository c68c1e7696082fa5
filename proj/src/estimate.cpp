#include "irrspec/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "irrspec/errors.hpp"
#include "irrspec/quadrature.hpp"

namespace irrspec {
namespace {

constexpr double kPi = std::numbers::pi;

// Evenly spaced nonnegative grids are evaluated by rotating exp(i lambda s)
// along the grid; this is the usual case of a [0, 2 pi] grid.
bool uniform_nonnegative(const std::vector<double>& grid) {
  if (grid.size() < 3 || grid.front() < 0.0) return false;
  const double step = grid[1] - grid[0];
  if (!(step > 0.0)) return false;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    const double expected = grid.front() + step * static_cast<double>(g);
    if (std::abs(grid[g] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) return false;
  }
  return true;
}

constexpr std::size_t kReseedInterval = 64;

void add_pair_rotating(const std::vector<double>& grid, double weight, double lag,
                       std::vector<double>& acc) {
  const double step = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  const std::complex<double> rotation = std::polar(1.0, step * lag);
  std::complex<double> z;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (g % kReseedInterval == 0) {
      z = std::polar(1.0, (grid.front() + step * static_cast<double>(g)) * lag);
    }
    acc[g] += weight * z.real();
    z *= rotation;
  }
}

// Trapezoid weight of node k out of `count` nodes.
double trapezoid_weight(std::size_t k, std::size_t count) {
  return (k == 0 || k + 1 == count) ? 0.5 : 1.0;
}

// sum_k w_k v_k cos(omega k step) via the Chebyshev recurrence.
double cosine_sum(const std::vector<double>& values, double step, double omega) {
  const std::size_t count = values.size();
  const double c1 = std::cos(omega * step);
  double previous = 0.0;
  double current = 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    // Restart the recurrence periodically to bound error growth.
    if (k % 256 == 0) {
      const double u = omega * step * static_cast<double>(k);
      current = std::cos(u);
      previous = std::cos(u - omega * step);
    }
    sum += trapezoid_weight(k, count) * values[k] * current;
    const double next = 2.0 * c1 * current - previous;
    previous = current;
    current = next;
  }
  return sum * step;
}

}  // namespace

double raised_cosine_kernel(double x) noexcept {
  if (!(std::abs(x) <= 1.0)) return 0.0;
  return 0.5 * (1.0 + std::cos(kPi * x));
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw ParameterError("grid needs n >= 2 and lo < hi");
  std::vector<double> grid(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) grid[k] = lo + step * static_cast<double>(k);
  grid.back() = hi;
  return grid;
}

std::vector<double> masry_estimate(const SampledPath& path, const EstimatorConfig& config) {
  const std::size_t n = path.values.size();
  if (n < 2 || path.times.size() != n) {
    throw ParameterError("estimation needs at least two samples with matching times");
  }
  if (!(config.beta > 0.0)) throw ParameterError("beta must be positive");
  if (!(config.bandwidth > 0.0)) throw ParameterError("bandwidth must be positive");
  if (!config.kernel) throw ParameterError("kernel is not set");

  const auto& grid = config.grid;
  std::vector<double> acc(grid.size(), 0.0);
  const bool rotate = uniform_nonnegative(grid);
  const double max_lag = 1.0 / config.bandwidth;
  const auto& t = path.times;
  const auto& x = path.values;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      const double lag = t[k] - t[j];
      if (lag > max_lag) break;
      const double weight = x[j] * x[k] * config.kernel(config.bandwidth * lag);
      if (weight == 0.0) continue;
      if (rotate) {
        add_pair_rotating(grid, weight, lag, acc);
      } else {
        for (std::size_t g = 0; g < grid.size(); ++g) acc[g] += weight * std::cos(grid[g] * lag);
      }
    }
  }
  const double scale = 1.0 / (kPi * config.beta * static_cast<double>(n));
  for (double& v : acc) v *= scale;
  return acc;
}

CovarianceSequenceEstimate empirical_covariance_sequence(std::span<const SampledPath> paths,
                                                         std::size_t max_lag) {
  if (paths.empty()) throw ParameterError("empirical covariance needs at least one path");
  for (const SampledPath& p : paths) {
    if (max_lag >= p.values.size()) {
      throw ParameterError("max_lag " + std::to_string(max_lag) +
                           " must be below the path length " + std::to_string(p.values.size()));
    }
  }
  const std::size_t runs = paths.size();
  CovarianceSequenceEstimate out;
  out.runs = runs;
  out.mean.assign(max_lag + 1, 0.0);
  out.standard_error.assign(max_lag + 1, 0.0);
  std::vector<double> per_run(runs);
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    for (std::size_t r = 0; r < runs; ++r) {
      const auto& x = paths[r].values;
      double s = 0.0;
      for (std::size_t m = 0; m + lag < x.size(); ++m) s += x[m] * x[m + lag];
      per_run[r] = s / static_cast<double>(x.size() - lag);
    }
    double mean = 0.0;
    for (double v : per_run) mean += v;
    mean /= static_cast<double>(runs);
    double ss = 0.0;
    for (double v : per_run) ss += (v - mean) * (v - mean);
    out.mean[lag] = mean;
    out.standard_error[lag] =
        runs > 1 ? std::sqrt(ss / static_cast<double>(runs - 1) / static_cast<double>(runs)) : 0.0;
  }
  return out;
}

namespace {

// Renewal density on (0, u_max]: with no minimum spacing the table's first
// node sits on the jump at the origin, so it is replaced by the right limit.
std::vector<double> right_limit_values(const RenewalDensityTable& table) {
  std::vector<double> h = table.values;
  if (table.min_spacing == 0.0 && h.size() > 2) h[0] = 2.0 * h[1] - h[2];
  return h;
}

}  // namespace

double CompoundMeasureView::density_at(double u) const {
  const double r = std::abs(u);
  if (density.empty() || r < min_spacing) return 0.0;
  const double position = r / step;
  const auto k = static_cast<std::size_t>(position);
  if (k + 1 >= density.size()) {
    if (k + 1 == density.size() && position <= static_cast<double>(k) + 1e-9) {
      return density.back();
    }
    throw ParameterError("compound density requested beyond the renewal window");
  }
  const double frac = position - static_cast<double>(k);
  return density[k] + frac * (density[k + 1] - density[k]);
}

CompoundMeasureView compound_covariance_view(const SpectrumModel& model,
                                             const SamplingScheme& scheme) {
  CompoundMeasureView view;
  const double beta = scheme.beta();
  view.atom_at_zero = beta * model.covariance(0.0);
  view.min_spacing = scheme.min_spacing();
  view.scheme_id = scheme.id();
  view.model_id = model.id();
  if (scheme.has_density()) {
    const RenewalDensityTable table = renewal_density(scheme);
    view.step = table.step;
    const std::vector<double> values = right_limit_values(table);
    view.density.resize(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double h = values[k];
      view.density[k] = h == 0.0 ? 0.0 : beta * model.covariance(table.node(k)) * h;
    }
  } else {
    for (const SpacingAtom& atom : renewal_atoms(scheme, 50.0 * scheme.mean_spacing())) {
      view.atoms.push_back({atom.location, beta * model.covariance(atom.location) * atom.mass});
    }
  }
  return view;
}

double compound_view_transform(const CompoundMeasureView& view, double lambda) {
  double value = view.atom_at_zero / (2.0 * kPi);
  if (!view.density.empty()) value += cosine_sum(view.density, view.step, lambda) / kPi;
  for (const SpacingAtom& atom : view.atoms) {
    value += atom.mass * std::cos(lambda * atom.location) / kPi;
  }
  return value;
}

IntegralEquationTerms masry_integral_rhs(const SpectrumModel& model,
                                         const SamplingScheme& scheme, double lambda) {
  const auto band = model.band();
  if (!band) throw UnsupportedError("the integral equation check needs a bandlimited model");
  const RenewalDensityTable table = renewal_density(scheme);
  const double beta = table.beta;

  const std::vector<double> h = right_limit_values(table);
  std::vector<double> fc(h.size());
  for (std::size_t k = 0; k < fc.size(); ++k) fc[k] = beta * (h[k] - beta);
  const std::size_t tail_start = fc.size() - fc.size() / 10;
  double tail = 0.0;
  for (std::size_t k = tail_start; k < fc.size(); ++k) tail = std::max(tail, std::abs(fc[k]));
  if (tail > 1e-4 * beta * beta) {
    throw NumericalError("reduced covariance density has not decayed by the end of the "
                         "renewal window",
                         tail / (beta * beta));
  }

  IntegralEquationTerms terms;
  terms.atom = beta * model.covariance(0.0) / (2.0 * kPi);
  const double edge = band->hi;
  // phi(lambda - w) is supported on w in [lambda - edge, lambda + edge].
  const quad::PanelRule rule =
      quad::gauss_legendre_panels({lambda - edge, lambda + edge}, 256);
  const double convolution = rule.integrate([&](double w) {
    const double p = model.psd(lambda - w);
    if (p == 0.0) return 0.0;
    return p * cosine_sum(fc, table.step, w) / kPi;
  });
  terms.continuous = beta * beta * model.psd(lambda) + convolution;
  return terms;
}

}  // namespace irrspec
