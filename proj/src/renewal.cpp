#include "irrspec/renewal.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <string>

#include "irrspec/errors.hpp"

namespace irrspec {
namespace {

constexpr double kTermMassFloor = 1e-10;

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Linear convolution of lattice sequences truncated to `length` entries,
// with a fixed second operand.
class LatticeConvolver {
 public:
  LatticeConvolver(const std::vector<double>& kernel, std::size_t length)
      : length_(length) {
    size_ = 1;
    while (size_ < 2 * length) size_ <<= 1;
    bins_ = size_ / 2 + 1;
    real_ = fftw_alloc_real(size_);
    spectrum_ = fftw_alloc_complex(bins_);
    kernel_spectrum_.resize(bins_);
    {
      std::lock_guard lock(planner_mutex());
      forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(size_), real_, spectrum_,
                                      FFTW_ESTIMATE);
      backward_ = fftw_plan_dft_c2r_1d(static_cast<int>(size_), spectrum_, real_,
                                       FFTW_ESTIMATE);
    }
    load(kernel);
    fftw_execute(forward_);
    for (std::size_t i = 0; i < bins_; ++i) {
      kernel_spectrum_[i] = {spectrum_[i][0], spectrum_[i][1]};
    }
  }

  LatticeConvolver(const LatticeConvolver&) = delete;
  LatticeConvolver& operator=(const LatticeConvolver&) = delete;

  ~LatticeConvolver() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(forward_);
      fftw_destroy_plan(backward_);
    }
    fftw_free(real_);
    fftw_free(spectrum_);
  }

  std::vector<double> convolve(const std::vector<double>& input) {
    load(input);
    fftw_execute(forward_);
    for (std::size_t i = 0; i < bins_; ++i) {
      const std::complex<double> v =
          std::complex<double>(spectrum_[i][0], spectrum_[i][1]) * kernel_spectrum_[i];
      spectrum_[i][0] = v.real();
      spectrum_[i][1] = v.imag();
    }
    fftw_execute(backward_);
    std::vector<double> out(length_);
    const double norm = 1.0 / static_cast<double>(size_);
    for (std::size_t i = 0; i < length_; ++i) out[i] = real_[i] * norm;
    return out;
  }

 private:
  void load(const std::vector<double>& values) {
    std::fill(real_, real_ + size_, 0.0);
    std::copy_n(values.begin(), std::min(values.size(), length_), real_);
  }

  std::size_t length_;
  std::size_t size_ = 0;
  std::size_t bins_ = 0;
  double* real_ = nullptr;
  fftw_complex* spectrum_ = nullptr;
  std::vector<std::complex<double>> kernel_spectrum_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

double default_step(const SamplingScheme& scheme) {
  const double d = scheme.min_spacing();
  return d > 0.0 ? d / 100.0 : scheme.mean_spacing() / 100.0;
}

}  // namespace

double RenewalDensityTable::u_max() const noexcept {
  return values.empty() ? 0.0 : node(values.size() - 1);
}

double RenewalDensityTable::at(double u) const {
  const double r = std::abs(u);
  if (r < min_spacing) return 0.0;
  if (r > u_max() * (1.0 + 1e-12)) {
    throw ParameterError("renewal density requested at |u| = " + std::to_string(r) +
                         " beyond the table end " + std::to_string(u_max()));
  }
  const double position = r / step;
  const auto k = std::min(static_cast<std::size_t>(position), values.size() - 1);
  if (k + 1 >= values.size()) return values.back();
  const double frac = position - static_cast<double>(k);
  return values[k] + frac * (values[k + 1] - values[k]);
}

RenewalDensityTable renewal_density(const SamplingScheme& scheme, double u_max,
                                    double grid_step) {
  if (!scheme.has_density()) {
    throw UnsupportedError("renewal density table needs a spacing density; use "
                           "renewal_atoms for '" + scheme.id() + "'");
  }
  const double d = scheme.min_spacing();
  if (!(grid_step > 0.0)) throw ResolutionError("grid step must be positive");
  const double limit = d > 0.0 ? d / 10.0 : scheme.mean_spacing() / 10.0;
  if (grid_step > limit) {
    throw ResolutionError("grid step " + std::to_string(grid_step) +
                          " exceeds the resolution limit " + std::to_string(limit));
  }
  if (!(u_max > d)) throw ParameterError("u_max must exceed the minimum spacing");

  const auto count = static_cast<std::size_t>(std::floor(u_max / grid_step + 0.5)) + 1;

  // Cell masses of the spacing law on cells centred at the nodes.
  std::vector<double> cell(count);
  std::size_t first_nonzero = count;
  for (std::size_t k = 0; k < count; ++k) {
    const double x = grid_step * static_cast<double>(k);
    cell[k] = scheme.cdf(x + 0.5 * grid_step) - scheme.cdf(x - 0.5 * grid_step);
    if (cell[k] > 0.0 && first_nonzero == count) first_nonzero = k;
  }

  RenewalDensityTable table;
  table.step = grid_step;
  table.min_spacing = d;
  table.beta = scheme.beta();
  table.values.assign(count, 0.0);

  LatticeConvolver convolver(cell, count);
  std::vector<double> term = cell;
  for (std::size_t n = 1;; ++n) {
    // Lattice support of the n-fold sum starts at n * first_nonzero; the
    // FFT leaves rounding noise elsewhere.
    const std::size_t start = std::min(count, n * first_nonzero);
    double mass = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      if (k < start || term[k] < 0.0) term[k] = 0.0;
      mass += term[k];
    }
    if (mass < kTermMassFloor) {
      table.tail_bound = mass;
      break;
    }
    for (std::size_t k = 0; k < count; ++k) table.values[k] += term[k];
    table.terms_used = n;
    if (n > 100 * count) {
      throw NumericalError("renewal series did not converge", mass);
    }
    term = convolver.convolve(term);
  }
  for (double& v : table.values) v /= grid_step;
  return table;
}

RenewalDensityTable renewal_density(const SamplingScheme& scheme) {
  return renewal_density(scheme, 50.0 * scheme.mean_spacing(), default_step(scheme));
}

std::vector<SpacingAtom> renewal_atoms(const SamplingScheme& scheme, double u_max) {
  if (scheme.atoms().empty()) {
    throw UnsupportedError("renewal_atoms needs an atomic spacing law");
  }
  std::vector<SpacingAtom> out;
  const double d = scheme.min_spacing();
  for (unsigned k = 1; static_cast<double>(k) * d <= u_max; ++k) {
    for (const SpacingAtom& atom : k_step_atoms(scheme, k)) {
      if (atom.location <= u_max && atom.mass > 0.0) out.push_back(atom);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const SpacingAtom& x, const SpacingAtom& y) { return x.location < y.location; });
  return out;
}

double reduced_covariance_density(const RenewalDensityTable& table, double u) {
  return table.beta * (table.at(u) - table.beta);
}

double reduced_covariance_atom(const SamplingScheme& scheme) noexcept {
  return scheme.beta();
}

B1Verdict check_assumption_b1(const SamplingScheme& scheme) {
  B1Verdict verdict;
  const double d = scheme.min_spacing();
  if (!scheme.has_density()) {
    verdict.holds = false;
    verdict.witness = Interval{0.0, d};
    verdict.reason =
        "atomic spacing law: the renewal measure has no density, so f_c + beta^2 "
        "vanishes almost everywhere";
    return verdict;
  }

  const RenewalDensityTable table = renewal_density(scheme);
  const double beta = table.beta;
  verdict.min_beta_h = beta * *std::min_element(table.values.begin(), table.values.end());

  // Longest leading run of nodes where h vanishes.
  std::size_t zero_run = 0;
  while (zero_run < table.values.size() && table.values[zero_run] <= 0.0) ++zero_run;
  if (zero_run > 0) {
    double hi = table.node(zero_run);
    if (d > 0.0 && hi > d) hi = d;
    verdict.witness = Interval{0.0, hi};
  }

  const std::size_t tail_start = table.values.size() - table.values.size() / 10;
  for (std::size_t k = tail_start; k < table.values.size(); ++k) {
    verdict.tail_deviation =
        std::max(verdict.tail_deviation, std::abs(table.values[k] - beta) / beta);
  }
  for (std::size_t k = 0; k < table.values.size(); ++k) {
    const double h = table.values[k];
    if (h > 0.0) verdict.ratio_integral += table.step * std::abs(h - beta) / h;
  }

  const bool positive = verdict.min_beta_h > 0.0;
  const bool integrable = verdict.tail_deviation <= 0.02;
  verdict.holds = positive && integrable;
  if (!positive) {
    verdict.reason = "f_c + beta^2 = beta h vanishes on the gap below the minimum spacing";
  } else if (!integrable) {
    verdict.reason = "f_c / (f_c + beta^2) does not decay within the computed window";
  } else {
    verdict.reason = "f_c + beta^2 > 0 on the grid and the ratio decays in the window";
  }
  return verdict;
}

}  // namespace irrspec
