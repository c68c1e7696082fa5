#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "irrspec/rng.hpp"

namespace irrspec {

// Inter-sample spacing laws; every spacing is d + (family-specific part).
struct ShiftedExponential {
  double theta = 1.0;  // mean of the exponential part
};
struct TwoPoint {
  double p = 0.5;      // probability of gap1
  double gap1 = 1.0;   // absolute gaps, both >= d
  double gap2 = 1.0;
};
struct ShiftedGamma {
  double shape = 1.0;
  double scale = 1.0;
};
struct Deterministic {};

using SpacingLaw = std::variant<ShiftedExponential, TwoPoint, ShiftedGamma, Deterministic>;

struct SpacingAtom {
  double location = 0.0;
  double mass = 0.0;
};

// Renewal sampling scheme with minimum spacing d. Immutable.
class SamplingScheme {
 public:
  // Throws ParameterError when the law violates the minimum spacing or its
  // own parameter ranges.
  SamplingScheme(double min_spacing, SpacingLaw law);

  double min_spacing() const noexcept { return d_; }
  const SpacingLaw& law() const noexcept { return law_; }
  const std::string& id() const noexcept { return id_; }

  double mean_spacing() const noexcept { return mean_; }
  // Mean intensity, samples per unit time.
  double beta() const noexcept { return 1.0 / mean_; }
  double spacing_sd() const noexcept;

  // True for laws with a spacing density; the others are atomic.
  bool has_density() const noexcept;
  // Support points of an atomic law (empty for laws with a density).
  std::vector<SpacingAtom> atoms() const;

  double cdf(double x) const;
  // Density of the spacing law; zero for atomic laws.
  double density(double x) const;

  // The density is positive on [l d, infinity) with l = 1 for the shifted
  // families; 0 for atomic laws.
  double positivity_threshold_factor() const noexcept;

  double draw_spacing(Rng& rng) const;

 private:
  double d_;
  SpacingLaw law_;
  std::string id_;
  double mean_ = 0.0;
};

SamplingScheme make_shifted_exponential(double d, double theta);
// Poisson sampling: exponential spacings with mean theta and no gap.
SamplingScheme make_poisson(double theta);
// Gaps g1*d and g2*d with probabilities p and 1-p.
SamplingScheme make_two_point(double d, double p, double g1, double g2);
// p = 0.68 with gaps d and 2.1 d: alias-free on a band wider than
// [-pi/d, pi/d] with mean spacing 1.352 d.
SamplingScheme make_wide_band_two_point(double d);
SamplingScheme make_shifted_gamma(double d, double shape, double scale);
SamplingScheme make_deterministic(double d);

// Parses `shifted-exp:d=<x>,theta=<y>` (theta=0 gives the deterministic
// scheme), `two-point:d=<x>,p=<p>,g1=<a>,g2=<b>`, `deterministic:d=<x>`,
// `shifted-gamma:d=<x>,shape=<k>,scale=<s>` and `poisson:theta=<y>`.
SamplingScheme parse_scheme(std::string_view text);

// t_1 = 0 followed by n - 1 i.i.d. spacings; deterministic given the seed.
std::vector<double> draw_times(const SamplingScheme& scheme, std::size_t n,
                               std::uint64_t seed);

// f'(lambda) = E[exp(i lambda spacing)].
std::complex<double> spacing_charfn(const SamplingScheme& scheme, double lambda);

// Characteristic function of the k-step spacing, f'(lambda)^k.
std::complex<double> k_step_charfn(const SamplingScheme& scheme, unsigned k,
                                   double lambda);

// Law of the k-step spacing of an atomic scheme, atoms merged by location.
std::vector<SpacingAtom> k_step_atoms(const SamplingScheme& scheme, unsigned k);

}  // namespace irrspec
