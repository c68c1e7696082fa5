#include "irrspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "irrspec/errors.hpp"
#include "irrspec/quadrature.hpp"
#include "keyvalue.hpp"

namespace irrspec {
namespace {

constexpr double kPi = std::numbers::pi;

std::string format_number(double x) {
  std::ostringstream out;
  out.precision(12);
  out << x;
  return out.str();
}

// Trapezoid quadrature of psd(l) cos(l t) on the model window, plus the
// analytic contribution of the algebraic tail beyond it.
double transform_at(const SpectrumModel& model, double t, double floor) {
  const double half_width = model.transform_half_width();
  const auto integrand = [&model, t](double lambda) {
    return model.psd(lambda) * std::cos(lambda * t);
  };
  double value = quad::checked_even_trapezoid(
      integrand, half_width, model.transform_intervals(), 1e-8, floor,
      "covariance_from_psd");
  if (!model.bandlimited()) {
    // 2 cos(fl) cos(tl) = cos((f + t) l) + cos((f - t) l)
    for (const TailTerm& term : model.tail()) {
      value += term.coefficient *
               (quad::cos_over_square_tail(std::abs(term.frequency + t), half_width) +
                quad::cos_over_square_tail(std::abs(term.frequency - t), half_width));
    }
  }
  return value;
}

double triangle_psd(double a, double lambda) {
  const double x = a * lambda;
  if (std::abs(x) < 1e-4) {
    // (1 - cos x) / lambda^2 = a^2 (1/2 - x^2 / 24 + ...)
    return a / (2.0 * kPi) * (1.0 - x * x / 12.0);
  }
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s / (kPi * a * lambda * lambda);
}

double simulation_bump_sum(double lambda) {
  const double amplitude = 2.0 * std::numbers::sqrt2 / kPi;
  const double first = 4.0 * lambda - 3.0 * kPi;
  const double second = 4.0 * lambda - 7.0 * kPi;
  return amplitude * (4.0 * std::exp(-8.0 * first * first / kPi) +
                      3.0 * std::exp(-9.0 * second * second / (2.0 * kPi)));
}

}  // namespace

SpectrumModel::SpectrumModel(Definition definition) {
  if (!definition.psd || !definition.covariance) {
    throw ParameterError("spectrum model '" + definition.id +
                         "' needs both a psd and a covariance");
  }
  if (!definition.band_edge && !(definition.window > 0.0)) {
    throw ParameterError("spectrum model '" + definition.id +
                         "' needs a band or a quadrature window");
  }
  def_ = std::make_shared<const Definition>(std::move(definition));
  variance_ = def_->variance ? *def_->variance : transform_at(*this, 0.0, 0.0);
}

std::optional<Interval> SpectrumModel::band() const {
  if (!def_->band_edge) return std::nullopt;
  return Interval::symmetric_about_zero(*def_->band_edge);
}

std::optional<Interval> SpectrumModel::covariance_support() const {
  if (!def_->support_half_width) return std::nullopt;
  return Interval::symmetric_about_zero(*def_->support_half_width);
}

double SpectrumModel::transform_half_width() const noexcept {
  return def_->band_edge ? *def_->band_edge : def_->window;
}

std::size_t SpectrumModel::transform_intervals() const noexcept {
  return def_->band_edge ? quad::kDefaultIntervals : def_->window_intervals;
}

double SpectrumModel::tail_psd(double lambda) const {
  double value = 0.0;
  for (const TailTerm& term : def_->tail) {
    value += term.coefficient * std::cos(term.frequency * lambda);
  }
  return value / (lambda * lambda);
}

SpectrumModel SpectrumModel::scaled(double factor) const {
  if (!(factor > 0.0)) throw ParameterError("scale factor must be positive");
  Definition out = *def_;
  out.id = format_number(factor) + "*" + def_->id;
  auto inner = def_;
  out.psd = [inner, factor](double l) { return factor * inner->psd(l); };
  out.covariance = [inner, factor](double t) {
    return factor * inner->covariance(t);
  };
  for (TailTerm& term : out.tail) term.coefficient *= factor;
  out.slope_at_zero *= factor;
  out.slope_at_support_edge *= factor;
  out.variance = factor * variance_;
  return SpectrumModel(std::move(out));
}

SpectrumModel sum(const SpectrumModel& first, const SpectrumModel& second) {
  SpectrumModel::Definition def;
  def.id = "sum(" + first.id() + "," + second.id() + ")";
  def.psd = [first, second](double l) { return first.psd(l) + second.psd(l); };
  def.covariance = [first, second](double t) {
    return first.covariance(t) + second.covariance(t);
  };
  if (first.bandlimited() && second.bandlimited()) {
    def.band_edge = std::max(first.transform_half_width(),
                             second.transform_half_width());
  } else {
    def.window = std::max(first.transform_half_width(),
                          second.transform_half_width());
    def.window_intervals =
        std::max(first.transform_intervals(), second.transform_intervals());
    for (const SpectrumModel* part : {&first, &second}) {
      if (part->bandlimited()) continue;
      def.tail.insert(def.tail.end(), part->tail().begin(), part->tail().end());
    }
  }
  const auto s1 = first.covariance_support();
  const auto s2 = second.covariance_support();
  if (s1 && s2) {
    def.support_half_width = std::max(s1->hi, s2->hi);
    if (s1->hi == s2->hi) {
      def.slope_at_support_edge = first.covariance_slope_at_support_edge() +
                                  second.covariance_slope_at_support_edge();
    } else {
      def.slope_at_support_edge = s1->hi > s2->hi
                                      ? first.covariance_slope_at_support_edge()
                                      : second.covariance_slope_at_support_edge();
    }
  }
  def.slope_at_zero =
      first.covariance_slope_at_zero() + second.covariance_slope_at_zero();
  def.variance = first.variance() + second.variance();
  return SpectrumModel(std::move(def));
}

ClassAMember make_triangle_pair(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw ParameterError("triangle half-width a must be positive, got " +
                         format_number(a));
  }
  SpectrumModel::Definition def;
  def.id = "triangle:a=" + format_number(a);
  def.psd = [a](double l) { return triangle_psd(a, l); };
  def.covariance = [a](double t) {
    const double r = std::abs(t);
    return r <= a ? 1.0 - r / a : 0.0;
  };
  def.support_half_width = a;
  // psd and its slope vanish at multiples of 2 pi / a.
  def.window = 20.0 * kPi / a;
  def.window_intervals = quad::kDefaultIntervals;
  def.tail = {{1.0 / (kPi * a), 0.0}, {-1.0 / (kPi * a), a}};
  def.slope_at_zero = -1.0 / a;
  def.slope_at_support_edge = -1.0 / a;
  def.variance = 1.0;
  return ClassAMember{a, SpectrumModel(std::move(def)), std::nullopt};
}

ClassAMember convolve_class_a(const ClassAMember& member,
                              const SpectrumModel& other) {
  if (!std::isfinite(other.variance()) || !(other.variance() >= 0.0)) {
    throw ParameterError("convolution partner '" + other.id() +
                         "' must have finite variance");
  }
  const SpectrumModel& inner = member.base;
  const double a = member.a;
  const auto other_support = other.covariance_support();
  const double edge =
      other_support ? std::min(a, other_support->hi) : a;

  // psd of the product covariance g = C_member * C_other, a cosine transform
  // over the compact support [0, edge].
  auto rule = std::make_shared<quad::PanelRule>(
      quad::gauss_legendre_panels({0.0, edge}, 64));
  auto weighted = std::make_shared<std::vector<double>>(rule->nodes.size());
  for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
    const double t = rule->nodes[i];
    (*weighted)[i] = rule->weights[i] * inner.covariance(t) * other.covariance(t) / kPi;
  }

  SpectrumModel::Definition def;
  def.id = "triangle-conv:a=" + format_number(a) + ",other=" + other.id();
  def.psd = [rule, weighted](double l) {
    double value = 0.0;
    for (std::size_t i = 0; i < weighted->size(); ++i) {
      value += (*weighted)[i] * std::cos(l * rule->nodes[i]);
    }
    return std::max(value, 0.0);
  };
  def.covariance = [inner, other](double t) {
    return inner.covariance(t) * other.covariance(t);
  };
  def.support_half_width = edge;
  def.window = 512.0 / a;
  def.window_intervals = 8 * quad::kDefaultIntervals;

  // Integration by parts of the cosine transform gives
  // psd(l) ~ (g'(edge-) cos(edge l) - g'(0+)) / (pi l^2).
  const double slope0 = inner.covariance_slope_at_zero() * other.covariance(0.0) +
                        inner.covariance(0.0) * other.covariance_slope_at_zero();
  double slope_edge = 0.0;
  if (edge < a) {
    slope_edge = inner.covariance(edge) * other.covariance_slope_at_support_edge();
  } else if (!other_support || other_support->hi > a) {
    slope_edge = inner.covariance_slope_at_support_edge() * other.covariance(a);
  }
  def.tail = {{-slope0 / kPi, 0.0}, {slope_edge / kPi, edge}};
  def.slope_at_zero = slope0;
  def.slope_at_support_edge = slope_edge;
  def.variance = inner.covariance(0.0) * other.covariance(0.0);

  ClassAMember out{a, SpectrumModel(std::move(def)), other};
  return out;
}

double eval_simulation_psd(double lambda) {
  if (std::abs(lambda) > 2.0 * kPi) return 0.0;
  return simulation_bump_sum(lambda) + simulation_bump_sum(-lambda);
}

SpectrumModel make_simulation_spectrum() {
  SpectrumModel::Definition def;
  def.id = "sim5";
  def.psd = eval_simulation_psd;
  // Each Gaussian bump has unit mass; its transform is closed-form. The mass
  // cut off at |lambda| = 2 pi is below 1e-7 of the variance.
  def.covariance = [](double t) {
    const double t2 = t * t;
    return 2.0 * (std::exp(-kPi * t2 / 512.0) * std::cos(0.75 * kPi * t) +
                  std::exp(-kPi * t2 / 288.0) * std::cos(1.75 * kPi * t));
  };
  def.band_edge = 2.0 * kPi;
  return SpectrumModel(std::move(def));
}

double covariance_from_psd(const SpectrumModel& model, double t) {
  return transform_at(model, t, 1e-10 * std::max(model.variance(), 1e-300));
}

double integrate_psd(const SpectrumModel& model) {
  return covariance_from_psd(model, 0.0);
}

std::vector<double> covariance_samples(const SpectrumModel& model, double step,
                                       std::size_t count) {
  std::vector<double> out(count + 1);
  for (std::size_t n = 0; n <= count; ++n) {
    out[n] = model.covariance(step * static_cast<double>(n));
  }
  return out;
}

double sinc_reconstruct(std::span<const double> samples, double step, double u) {
  if (samples.empty()) throw ParameterError("sinc_reconstruct needs samples");
  if (!(step > 0.0)) throw ParameterError("sampling step must be positive");
  const double x = u / step;
  const double nearest = std::nearbyint(x);
  const double offset = x - nearest;
  const auto last = static_cast<long>(samples.size()) - 1;
  if (offset == 0.0) {
    const long k = static_cast<long>(std::abs(nearest));
    return k <= last ? samples[static_cast<std::size_t>(k)] : 0.0;
  }
  // sin(pi (x - n)) = (-1)^(round(x) - n) sin(pi * offset)
  const double sin_offset = std::sin(kPi * offset);
  const bool nearest_odd = std::fmod(std::abs(nearest), 2.0) == 1.0;
  double value = 0.0;
  for (long n = -last; n <= last; ++n) {
    const double c = samples[static_cast<std::size_t>(std::abs(n))];
    if (c == 0.0) continue;
    const bool odd = ((n % 2) != 0) != nearest_odd;
    const double numerator = odd ? -sin_offset : sin_offset;
    value += c * numerator / (kPi * (x - static_cast<double>(n)));
  }
  return value;
}

SpectrumModel parse_spectrum(std::string_view id) {
  const detail::ParsedId parsed = detail::parse_id(id, "other");
  if (parsed.name == "sim5") {
    parsed.expect_only({});
    return make_simulation_spectrum();
  }
  if (parsed.name == "triangle") {
    parsed.expect_only({"a"});
    return make_triangle_pair(parsed.number("a")).base;
  }
  if (parsed.name == "triangle-conv") {
    parsed.expect_only({"a", "other"});
    const auto other = parsed.find("other");
    if (!other) throw ParameterError("triangle-conv needs other=<id>");
    return convolve_class_a(make_triangle_pair(parsed.number("a")),
                            parse_spectrum(*other))
        .base;
  }
  throw ParameterError("unknown spectrum model '" + std::string(id) + "'");
}

}  // namespace irrspec
