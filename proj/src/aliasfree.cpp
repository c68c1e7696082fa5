#include "irrspec/aliasfree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include "irrspec/errors.hpp"
#include "irrspec/quadrature.hpp"

namespace irrspec {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kWindow = 1.2;
constexpr double kCoarsestResolution = 1.0 / 64.0;
constexpr std::size_t kSmallRegionCells = 4;

using Point = std::complex<double>;

double cross(Point a, Point b) { return a.real() * b.imag() - a.imag() * b.real(); }

int orientation(Point a, Point b, Point c) {
  const double v = cross(b - a, c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

bool on_segment(Point a, Point b, Point p) {
  return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
         std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

// Closed-segment intersection, touching included.
bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

class Raster {
 public:
  explicit Raster(double resolution)
      : resolution_(resolution),
        side_(static_cast<std::size_t>(std::ceil(2.0 * kWindow / resolution))),
        state_(side_ * side_, kFree),
        visitors_(side_ * side_) {}

  std::size_t side() const noexcept { return side_; }

  // Supercover traversal: every cell the closed segment touches, with both
  // neighbours marked when it passes through a cell corner.
  void mark_segment(Point a, Point b, int segment) {
    const double x0 = (a.real() + kWindow) / resolution_;
    const double y0 = (a.imag() + kWindow) / resolution_;
    const double x1 = (b.real() + kWindow) / resolution_;
    const double y1 = (b.imag() + kWindow) / resolution_;
    auto ix = static_cast<long>(std::floor(x0));
    auto iy = static_cast<long>(std::floor(y0));
    const double dx = x1 - x0;
    const double dy = y1 - y0;
    const long step_x = dx > 0 ? 1 : -1;
    const long step_y = dy > 0 ? 1 : -1;
    const double inf = std::numeric_limits<double>::infinity();
    double t_max_x = dx != 0.0 ? ((step_x > 0 ? ix + 1 : ix) - x0) / dx : inf;
    double t_max_y = dy != 0.0 ? ((step_y > 0 ? iy + 1 : iy) - y0) / dy : inf;
    const double t_delta_x = dx != 0.0 ? std::abs(1.0 / dx) : inf;
    const double t_delta_y = dy != 0.0 ? std::abs(1.0 / dy) : inf;

    visit(ix, iy, segment);
    while (std::min(t_max_x, t_max_y) <= 1.0) {
      if (std::abs(t_max_x - t_max_y) <= 1e-12) {
        visit(ix + step_x, iy, segment);
        visit(ix, iy + step_y, segment);
        ix += step_x;
        iy += step_y;
        t_max_x += t_delta_x;
        t_max_y += t_delta_y;
      } else if (t_max_x < t_max_y) {
        ix += step_x;
        t_max_x += t_delta_x;
      } else {
        iy += step_y;
        t_max_y += t_delta_y;
      }
      visit(ix, iy, segment);
    }
  }

  // Flood fill from the border; returns the sizes of the bounded components.
  std::vector<std::size_t> bounded_regions() {
    std::deque<std::size_t> queue;
    const auto seed = [&](std::size_t i, std::size_t j) {
      const std::size_t idx = i * side_ + j;
      if (state_[idx] == kFree) {
        state_[idx] = kOutside;
        queue.push_back(idx);
      }
    };
    for (std::size_t k = 0; k < side_; ++k) {
      seed(0, k);
      seed(side_ - 1, k);
      seed(k, 0);
      seed(k, side_ - 1);
    }
    fill(queue, kOutside);

    std::vector<std::size_t> sizes;
    for (std::size_t idx = 0; idx < state_.size(); ++idx) {
      if (state_[idx] != kFree) continue;
      state_[idx] = kInside;
      queue.push_back(idx);
      sizes.push_back(fill(queue, kInside));
    }
    return sizes;
  }

  // Pairs of non-adjacent segments that share a cell.
  std::set<std::pair<int, int>> candidate_pairs(int segment_count, bool closed) const {
    std::set<std::pair<int, int>> pairs;
    for (const auto& list : visitors_) {
      for (std::size_t p = 0; p < list.size(); ++p) {
        for (std::size_t q = p + 1; q < list.size(); ++q) {
          int i = std::min(list[p], list[q]);
          int j = std::max(list[p], list[q]);
          if (j - i <= 1) continue;
          if (closed && i == 0 && j == segment_count - 1) continue;
          pairs.emplace(i, j);
        }
      }
    }
    return pairs;
  }

 private:
  static constexpr std::uint8_t kFree = 0;
  static constexpr std::uint8_t kCurve = 1;
  static constexpr std::uint8_t kOutside = 2;
  static constexpr std::uint8_t kInside = 3;

  void visit(long i, long j, int segment) {
    if (i < 0 || j < 0 || i >= static_cast<long>(side_) || j >= static_cast<long>(side_)) {
      return;
    }
    const std::size_t idx = static_cast<std::size_t>(i) * side_ + static_cast<std::size_t>(j);
    state_[idx] = kCurve;
    auto& list = visitors_[idx];
    if (list.empty() || list.back() != segment) list.push_back(segment);
  }

  std::size_t fill(std::deque<std::size_t>& queue, std::uint8_t label) {
    std::size_t count = queue.size();
    while (!queue.empty()) {
      const std::size_t idx = queue.front();
      queue.pop_front();
      const std::size_t i = idx / side_;
      const std::size_t j = idx % side_;
      const auto push = [&](std::size_t n) {
        if (state_[n] == kFree) {
          state_[n] = label;
          queue.push_back(n);
          ++count;
        }
      };
      if (i > 0) push(idx - side_);
      if (i + 1 < side_) push(idx + side_);
      if (j > 0) push(idx - 1);
      if (j + 1 < side_) push(idx + 1);
    }
    return count;
  }

  double resolution_;
  std::size_t side_;
  std::vector<std::uint8_t> state_;
  std::vector<std::vector<int>> visitors_;
};

void refine(const SamplingScheme& scheme, double lo, Point z_lo, double hi, Point z_hi,
            double max_gap, double min_width, Polyline& out) {
  if (std::abs(z_hi - z_lo) > max_gap && hi - lo > min_width) {
    const double mid = 0.5 * (lo + hi);
    const Point z_mid = spacing_charfn(scheme, mid);
    refine(scheme, lo, z_lo, mid, z_mid, max_gap, min_width, out);
    refine(scheme, mid, z_mid, hi, z_hi, max_gap, min_width, out);
    return;
  }
  out.lambda.push_back(hi);
  out.points.push_back(z_hi);
}

// Upper quantile proxy for the n-step spacing.
double spacing_extent(const SamplingScheme& scheme, std::size_t n) {
  const double nn = static_cast<double>(n);
  return nn * scheme.mean_spacing() + 15.0 * scheme.spacing_sd() * std::sqrt(nn) +
         15.0 * scheme.spacing_sd();
}

// Decay exponent m and scale s with |f'(l)|^n <= (s l)^(-m), for laws with
// a density.
std::pair<double, double> charfn_decay(const SamplingScheme& scheme, std::size_t n) {
  if (const auto* e = std::get_if<ShiftedExponential>(&scheme.law())) {
    return {static_cast<double>(n), e->theta};
  }
  const auto& g = std::get<ShiftedGamma>(scheme.law());
  return {static_cast<double>(n) * g.shape, g.scale};
}

}  // namespace

Polyline trace_contour(const SamplingScheme& scheme, Interval band, std::size_t points,
                       double resolution) {
  if (points < 64) throw ParameterError("trace_contour needs at least 64 points");
  if (!std::isfinite(band.lo) || !std::isfinite(band.hi) || !(band.hi > band.lo)) {
    throw ParameterError("trace_contour needs a finite band with lo < hi");
  }
  if (!(resolution > 0.0)) throw ParameterError("resolution must be positive");
  Polyline out;
  const double width = band.width();
  const double min_width = 1e-12 * width;
  double lo = band.lo;
  Point z_lo = spacing_charfn(scheme, lo);
  out.lambda.push_back(lo);
  out.points.push_back(z_lo);
  for (std::size_t k = 1; k < points; ++k) {
    const double hi = k + 1 == points
                          ? band.hi
                          : band.lo + width * static_cast<double>(k) /
                                          static_cast<double>(points - 1);
    const Point z_hi = spacing_charfn(scheme, hi);
    refine(scheme, lo, z_lo, hi, z_hi, 0.5 * resolution, min_width, out);
    lo = hi;
    z_lo = z_hi;
  }
  return out;
}

ContourVerdict divides_plane(const Polyline& polyline, double resolution) {
  if (polyline.points.empty()) throw ParameterError("divides_plane needs a nonempty polyline");
  if (!(resolution > 0.0) || resolution > kCoarsestResolution) {
    throw ResolutionError("raster cell size must be in (0, 1/64], got " +
                          std::to_string(resolution));
  }
  ContourVerdict verdict;
  verdict.polyline = polyline;
  verdict.resolution = resolution;
  if (!polyline.lambda.empty()) {
    verdict.band = {polyline.lambda.front(), polyline.lambda.back()};
  }

  Raster raster(resolution);
  const auto& pts = polyline.points;
  const int segments = static_cast<int>(pts.size()) - 1;
  if (segments == 0) {
    raster.mark_segment(pts[0], pts[0], 0);
  }
  for (int s = 0; s < segments; ++s) {
    raster.mark_segment(pts[static_cast<std::size_t>(s)], pts[static_cast<std::size_t>(s) + 1], s);
  }

  // Exact self-intersections among segments that share a cell.
  for (const auto& [i, j] : raster.candidate_pairs(segments, false)) {
    const auto a = static_cast<std::size_t>(i);
    const auto b = static_cast<std::size_t>(j);
    if (segments_intersect(pts[a], pts[a + 1], pts[b], pts[b + 1])) {
      ++verdict.self_intersections;
    }
  }

  verdict.region_cells = raster.bounded_regions();
  verdict.bounded_region_count = verdict.region_cells.size();
  verdict.divides_plane = verdict.bounded_region_count > 0;
  const bool small_region =
      std::any_of(verdict.region_cells.begin(), verdict.region_cells.end(),
                  [](std::size_t cells) { return cells <= kSmallRegionCells; });
  verdict.conservative =
      small_region || verdict.divides_plane != (verdict.self_intersections > 0);
  return verdict;
}

ContourVerdict certify_band(const SamplingScheme& scheme, double c, std::size_t points,
                            double resolution) {
  const double d = scheme.min_spacing();
  if (!(d > 0.0)) throw ParameterError("bands in units of pi/d need d > 0");
  if (!(c > 0.0)) throw ParameterError("band factor c must be positive");
  const double edge = c * kPi / d;
  return divides_plane(trace_contour(scheme, {-edge, edge}, points, resolution), resolution);
}

BandSearchResult max_aliasfree_band(const SamplingScheme& scheme, double c_max,
                                    double step, std::size_t points, double resolution) {
  if (!(step > 0.0) || !(step <= c_max)) {
    throw ParameterError("band search needs 0 < step <= c_max");
  }
  BandSearchResult result;
  const auto count = static_cast<std::size_t>(std::floor(c_max / step + 1e-9));
  for (std::size_t k = 1; k <= count; ++k) {
    const double c = step * static_cast<double>(k);
    ContourVerdict verdict = certify_band(scheme, c, points, resolution);
    if (!verdict.divides_plane) result.largest_alias_free = c;
    result.verdicts.emplace_back(c, std::move(verdict));
  }
  return result;
}

std::vector<double> sampled_covariance_sequence(const SpectrumModel& model,
                                                const SamplingScheme& scheme,
                                                std::size_t max_n) {
  const double half_width = model.transform_half_width();
  const auto support = model.covariance_support();
  const double extent = (support ? support->hi : 0.0) + spacing_extent(scheme, max_n);
  // Poisson summation: the trapezoid rule is exact up to aliases of the
  // lag-domain extent, which the step keeps beyond 1.25 * extent.
  const std::size_t base_half = model.transform_intervals() / 2;
  const double alias_step = 2.0 * kPi / (1.25 * extent);
  const auto half_intervals = static_cast<std::size_t>(std::max<double>(
      static_cast<double>(base_half), std::ceil(half_width / alias_step)));
  const double h = half_width / static_cast<double>(half_intervals);

  std::vector<double> coarse(max_n + 1, 0.0);
  std::vector<double> midpoints(max_n + 1, 0.0);
  const auto accumulate = [&](double lambda, double weight, std::vector<double>& into) {
    const double density = model.psd(lambda);
    if (density == 0.0) return;
    const std::complex<double> f = spacing_charfn(scheme, lambda);
    std::complex<double> power = 1.0;
    into[0] += weight * density;
    for (std::size_t n = 1; n <= max_n; ++n) {
      power *= f;
      into[n] += weight * density * power.real();
    }
  };
  for (std::size_t k = 0; k <= half_intervals; ++k) {
    const double weight = (k == 0 || k == half_intervals) ? 0.5 : 1.0;
    accumulate(h * static_cast<double>(k), weight, coarse);
  }
  for (std::size_t k = 0; k < half_intervals; ++k) {
    accumulate(h * (static_cast<double>(k) + 0.5), 1.0, midpoints);
  }
  // Endpoint (Euler-Maclaurin) correction -h^2/12 f'(L) on each half, with
  // f' from a one-sided second-order difference on the same grid.
  const auto values_at = [&](double lambda) {
    std::vector<double> v(max_n + 1, 0.0);
    accumulate(lambda, 1.0, v);
    return v;
  };
  const double edge = h * static_cast<double>(half_intervals);
  const auto f0 = values_at(edge);
  const auto f_half = values_at(edge - 0.5 * h);
  const auto f1 = values_at(edge - h);
  const auto f2 = values_at(edge - 2.0 * h);

  std::vector<double> r(max_n + 1);
  const double tolerance = 1e-9 * std::max(model.variance(), 1e-300);
  for (std::size_t n = 0; n <= max_n; ++n) {
    const double slope_coarse = (3.0 * f0[n] - 4.0 * f1[n] + f2[n]) / (2.0 * h);
    const double slope_fine = (3.0 * f0[n] - 4.0 * f_half[n] + f1[n]) / h;
    const double rough = 2.0 * h * coarse[n] - h * h / 6.0 * slope_coarse;
    r[n] = h * (coarse[n] + midpoints[n]) - h * h / 24.0 * slope_fine;
    if (std::abs(r[n] - rough) > tolerance) {
      throw NumericalError("sampled covariance quadrature did not converge at lag " +
                               std::to_string(n),
                           std::abs(r[n] - rough));
    }
  }
  if (model.bandlimited()) return r;

  // Algebraic tail of the psd beyond the window.
  const double tail_tolerance = 1e-12 * std::max(model.variance(), 1e-300);
  double tail_weight = 0.0;
  for (const TailTerm& term : model.tail()) tail_weight += std::abs(term.coefficient);
  double max_frequency = 0.0;
  for (const TailTerm& term : model.tail()) max_frequency = std::max(max_frequency, term.frequency);

  const auto analytic_tail = [&](const std::vector<SpacingAtom>& atoms) {
    double value = 0.0;
    for (const TailTerm& term : model.tail()) {
      for (const SpacingAtom& atom : atoms) {
        value += term.coefficient * atom.mass *
                 (quad::cos_over_square_tail(std::abs(term.frequency + atom.location), half_width) +
                  quad::cos_over_square_tail(std::abs(term.frequency - atom.location), half_width));
      }
    }
    return value;
  };

  r[0] += analytic_tail({{0.0, 1.0}});
  for (std::size_t n = 1; n <= max_n; ++n) {
    if (!scheme.has_density()) {
      r[n] += analytic_tail(k_step_atoms(scheme, static_cast<unsigned>(n)));
      continue;
    }
    const auto [m, s] = charfn_decay(scheme, n);
    // 2 * tail_weight * integral over [upper, inf) of (s l)^-m / l^2.
    const double upper = std::max(
        half_width,
        std::pow(2.0 * tail_weight / ((m + 1.0) * std::pow(s, m) * tail_tolerance),
                 1.0 / (m + 1.0)));
    if (upper <= half_width) continue;
    const double frequency =
        max_frequency + static_cast<double>(n) * scheme.min_spacing() + 1.0;
    const double panel = std::min(1.0, 2.0 * kPi / frequency);
    const auto panels = static_cast<std::size_t>(std::ceil((upper - half_width) / panel));
    const quad::PanelRule rule = quad::gauss_legendre_panels({half_width, upper}, panels);
    const unsigned k = static_cast<unsigned>(n);
    r[n] += 2.0 * rule.integrate([&](double lambda) {
      return model.tail_psd(lambda) * k_step_charfn(scheme, k, lambda).real();
    });
  }
  return r;
}

double theoretical_sampled_covariance(const SpectrumModel& model,
                                      const SamplingScheme& scheme, std::size_t n) {
  return sampled_covariance_sequence(model, scheme, n).back();
}

}  // namespace irrspec
