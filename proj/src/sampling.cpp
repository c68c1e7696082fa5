#include "irrspec/sampling.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "irrspec/errors.hpp"
#include "keyvalue.hpp"

namespace irrspec {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(12);
  out << x;
  return out.str();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ParameterError(message);
}

}  // namespace

SamplingScheme::SamplingScheme(double min_spacing, SpacingLaw law)
    : d_(min_spacing), law_(std::move(law)) {
  require(std::isfinite(d_) && d_ >= 0.0, "minimum spacing d must be >= 0");
  std::visit(
      Overloaded{
          [&](const ShiftedExponential& e) {
            require(std::isfinite(e.theta) && e.theta > 0.0,
                    "shifted-exponential needs theta > 0");
            mean_ = d_ + e.theta;
            id_ = "shifted-exp:d=" + fmt(d_) + ",theta=" + fmt(e.theta);
          },
          [&](const TwoPoint& t) {
            require(t.p >= 0.0 && t.p <= 1.0, "two-point needs 0 <= p <= 1");
            require(d_ > 0.0, "two-point needs d > 0");
            require(t.gap1 >= d_ && t.gap2 >= d_, "two-point gaps must be >= d");
            mean_ = t.p * t.gap1 + (1.0 - t.p) * t.gap2;
            id_ = "two-point:d=" + fmt(d_) + ",p=" + fmt(t.p) +
                  ",g1=" + fmt(t.gap1 / d_) + ",g2=" + fmt(t.gap2 / d_);
          },
          [&](const ShiftedGamma& g) {
            require(g.shape > 0.0 && g.scale > 0.0,
                    "shifted-gamma needs shape > 0 and scale > 0");
            mean_ = d_ + g.shape * g.scale;
            id_ = "shifted-gamma:d=" + fmt(d_) + ",shape=" + fmt(g.shape) +
                  ",scale=" + fmt(g.scale);
          },
          [&](const Deterministic&) {
            require(d_ > 0.0, "deterministic sampling needs d > 0");
            mean_ = d_;
            id_ = "deterministic:d=" + fmt(d_);
          },
      },
      law_);
}

double SamplingScheme::spacing_sd() const noexcept {
  return std::visit(
      Overloaded{
          [](const ShiftedExponential& e) { return e.theta; },
          [](const TwoPoint& t) {
            return std::sqrt(t.p * (1.0 - t.p)) * std::abs(t.gap2 - t.gap1);
          },
          [](const ShiftedGamma& g) { return std::sqrt(g.shape) * g.scale; },
          [](const Deterministic&) { return 0.0; },
      },
      law_);
}

bool SamplingScheme::has_density() const noexcept {
  return std::holds_alternative<ShiftedExponential>(law_) ||
         std::holds_alternative<ShiftedGamma>(law_);
}

std::vector<SpacingAtom> SamplingScheme::atoms() const {
  if (const auto* t = std::get_if<TwoPoint>(&law_)) {
    if (t->gap1 == t->gap2) return {{t->gap1, 1.0}};
    std::vector<SpacingAtom> out;
    if (t->p > 0.0) out.push_back({t->gap1, t->p});
    if (t->p < 1.0) out.push_back({t->gap2, 1.0 - t->p});
    return out;
  }
  if (std::holds_alternative<Deterministic>(law_)) return {{d_, 1.0}};
  return {};
}

double SamplingScheme::cdf(double x) const {
  if (x < d_) return 0.0;
  const double excess = x - d_;
  return std::visit(
      Overloaded{
          [&](const ShiftedExponential& e) { return -std::expm1(-excess / e.theta); },
          [&](const ShiftedGamma& g) {
            return boost::math::gamma_p(g.shape, excess / g.scale);
          },
          [&](const TwoPoint& t) {
            double total = 0.0;
            if (x >= t.gap1) total += t.p;
            if (x >= t.gap2) total += 1.0 - t.p;
            return total;
          },
          [](const Deterministic&) { return 1.0; },
      },
      law_);
}

double SamplingScheme::density(double x) const {
  if (x < d_) return 0.0;
  const double excess = x - d_;
  return std::visit(
      Overloaded{
          [&](const ShiftedExponential& e) { return std::exp(-excess / e.theta) / e.theta; },
          [&](const ShiftedGamma& g) {
            if (excess == 0.0) {
              return g.shape < 1.0 ? std::numeric_limits<double>::infinity()
                                   : (g.shape == 1.0 ? 1.0 / g.scale : 0.0);
            }
            return boost::math::gamma_p_derivative(g.shape, excess / g.scale) / g.scale;
          },
          [](const TwoPoint&) { return 0.0; },
          [](const Deterministic&) { return 0.0; },
      },
      law_);
}

double SamplingScheme::positivity_threshold_factor() const noexcept {
  return has_density() ? 1.0 : 0.0;
}

double SamplingScheme::draw_spacing(Rng& rng) const {
  return std::visit(
      Overloaded{
          [&](const ShiftedExponential& e) { return d_ + rng.exponential(e.theta); },
          [&](const ShiftedGamma& g) { return d_ + rng.gamma(g.shape, g.scale); },
          [&](const TwoPoint& t) { return rng.uniform() < t.p ? t.gap1 : t.gap2; },
          [&](const Deterministic&) { return d_; },
      },
      law_);
}

SamplingScheme make_shifted_exponential(double d, double theta) {
  return SamplingScheme(d, ShiftedExponential{theta});
}

SamplingScheme make_poisson(double theta) {
  return SamplingScheme(0.0, ShiftedExponential{theta});
}

SamplingScheme make_two_point(double d, double p, double g1, double g2) {
  return SamplingScheme(d, TwoPoint{p, g1 * d, g2 * d});
}

SamplingScheme make_wide_band_two_point(double d) {
  return make_two_point(d, 0.68, 1.0, 2.1);
}

SamplingScheme make_shifted_gamma(double d, double shape, double scale) {
  return SamplingScheme(d, ShiftedGamma{shape, scale});
}

SamplingScheme make_deterministic(double d) {
  return SamplingScheme(d, Deterministic{});
}

SamplingScheme parse_scheme(std::string_view text) {
  const detail::ParsedId parsed = detail::parse_id(text);
  if (parsed.name == "shifted-exp") {
    parsed.expect_only({"d", "theta"});
    const double d = parsed.number("d");
    const double theta = parsed.number("theta");
    if (theta == 0.0) return make_deterministic(d);
    return make_shifted_exponential(d, theta);
  }
  if (parsed.name == "poisson") {
    parsed.expect_only({"theta"});
    return make_poisson(parsed.number_or("theta", 1.0));
  }
  if (parsed.name == "two-point") {
    parsed.expect_only({"d", "p", "g1", "g2"});
    return make_two_point(parsed.number("d"), parsed.number_or("p", 0.68),
                          parsed.number_or("g1", 1.0), parsed.number_or("g2", 2.1));
  }
  if (parsed.name == "deterministic") {
    parsed.expect_only({"d"});
    return make_deterministic(parsed.number("d"));
  }
  if (parsed.name == "shifted-gamma") {
    parsed.expect_only({"d", "shape", "scale"});
    return make_shifted_gamma(parsed.number("d"), parsed.number("shape"),
                              parsed.number("scale"));
  }
  throw ParameterError("unknown sampling scheme '" + std::string(text) + "'");
}

std::vector<double> draw_times(const SamplingScheme& scheme, std::size_t n,
                               std::uint64_t seed) {
  if (n == 0) throw ParameterError("draw_times needs n >= 1");
  Rng rng(seed);
  const double d = scheme.min_spacing();
  std::vector<double> times(n);
  times[0] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double previous = times[k - 1];
    double next = previous + scheme.draw_spacing(rng);
    // Rounding of the running sum must not undercut the minimum spacing.
    while (next - previous < d) next = std::nextafter(next, HUGE_VAL);
    times[k] = next;
  }
  return times;
}

std::complex<double> spacing_charfn(const SamplingScheme& scheme, double lambda) {
  const double d = scheme.min_spacing();
  return std::visit(
      Overloaded{
          [&](const ShiftedExponential& e) {
            const double x = e.theta * lambda;
            return std::polar(1.0 / std::sqrt(1.0 + x * x), lambda * d + std::atan(x));
          },
          [&](const ShiftedGamma& g) {
            const double x = g.scale * lambda;
            return std::polar(std::pow(1.0 + x * x, -0.5 * g.shape),
                              lambda * d + g.shape * std::atan(x));
          },
          [&](const TwoPoint& t) {
            return t.p * std::polar(1.0, lambda * t.gap1) +
                   (1.0 - t.p) * std::polar(1.0, lambda * t.gap2);
          },
          [&](const Deterministic&) { return std::polar(1.0, lambda * d); },
      },
      scheme.law());
}

std::complex<double> k_step_charfn(const SamplingScheme& scheme, unsigned k,
                                   double lambda) {
  if (k == 0) throw ParameterError("k_step_charfn needs k >= 1");
  std::complex<double> base = spacing_charfn(scheme, lambda);
  std::complex<double> result = 1.0;
  bool first = true;
  for (unsigned e = k;;) {
    if (e & 1U) {
      result = first ? base : result * base;
      first = false;
    }
    e >>= 1U;
    if (e == 0) break;
    base *= base;
  }
  return result;
}

std::vector<SpacingAtom> k_step_atoms(const SamplingScheme& scheme, unsigned k) {
  const std::vector<SpacingAtom> single = scheme.atoms();
  if (single.empty()) throw UnsupportedError("k_step_atoms needs an atomic law");
  // Keyed by location rounded to a relative 1e-12 grid so that sums reached
  // in different orders merge.
  const double quantum = 1e-12 * scheme.mean_spacing();
  std::map<long long, SpacingAtom> current{{0, {0.0, 1.0}}};
  for (unsigned step = 0; step < k; ++step) {
    std::map<long long, SpacingAtom> next;
    for (const auto& [key, atom] : current) {
      for (const SpacingAtom& s : single) {
        const double location = atom.location + s.location;
        const auto slot = static_cast<long long>(std::llround(location / quantum));
        auto& target = next[slot];
        target.location = location;
        target.mass += atom.mass * s.mass;
      }
    }
    current = std::move(next);
  }
  std::vector<SpacingAtom> out;
  out.reserve(current.size());
  for (const auto& [key, atom] : current) out.push_back(atom);
  return out;
}

}  // namespace irrspec
