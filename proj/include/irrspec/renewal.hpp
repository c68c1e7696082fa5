#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "irrspec/interval.hpp"
#include "irrspec/sampling.hpp"

namespace irrspec {

// Renewal density h(u) = sum_n f^(n)(|u|) tabulated on k * step, k = 0..K.
struct RenewalDensityTable {
  double step = 0.0;
  double min_spacing = 0.0;
  double beta = 0.0;
  std::vector<double> values;
  std::size_t terms_used = 0;
  // Mass on [0, u_max] of the first convolution power left out.
  double tail_bound = 0.0;

  double u_max() const noexcept;
  double node(std::size_t k) const noexcept { return step * static_cast<double>(k); }
  // h(|u|); exactly 0 for |u| < d, linear between nodes. Throws
  // ParameterError beyond u_max.
  double at(double u) const;
};

// Iterated self-convolution of the lattice-discretized spacing law (cell
// masses from the CDF) until a term carries less than 1e-10 mass on the grid.
// Throws ResolutionError when grid_step > d / 10 (or > mean / 10 for d = 0)
// and UnsupportedError for atomic laws.
RenewalDensityTable renewal_density(const SamplingScheme& scheme, double u_max,
                                    double grid_step);
// Defaults: step d/100 (mean/100 when d = 0), u_max = 50 mean spacings.
RenewalDensityTable renewal_density(const SamplingScheme& scheme);

// Renewal measure of an atomic law: atoms of sum_n F^(n) on (0, u_max].
std::vector<SpacingAtom> renewal_atoms(const SamplingScheme& scheme, double u_max);

// f_c(u) = beta (h(|u|) - beta); the atom beta at 0 is reported separately
// by reduced_covariance_atom.
double reduced_covariance_density(const RenewalDensityTable& table, double u);
double reduced_covariance_atom(const SamplingScheme& scheme) noexcept;

struct B1Verdict {
  bool holds = false;
  // Open interval (lo, hi) of lags where f_c + beta^2 = beta h vanishes.
  std::optional<Interval> witness;
  double min_beta_h = 0.0;
  // max |h - beta| / beta over the last tenth of the window.
  double tail_deviation = 0.0;
  // Integral of |f_c / (f_c + beta^2)| over the window where it is defined.
  double ratio_integral = 0.0;
  std::string reason;
};

// Positivity of f_c + beta^2 and integrability of f_c / (f_c + beta^2)
// on the default renewal table.
B1Verdict check_assumption_b1(const SamplingScheme& scheme);

}  // namespace irrspec
