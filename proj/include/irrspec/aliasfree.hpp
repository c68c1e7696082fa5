#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "irrspec/interval.hpp"
#include "irrspec/sampling.hpp"
#include "irrspec/spectra.hpp"

namespace irrspec {

// Image of a frequency band under the spacing characteristic function.
struct Polyline {
  std::vector<double> lambda;
  std::vector<std::complex<double>> points;

  std::size_t size() const noexcept { return points.size(); }
};

// Outcome of the plane-division test for one polyline.
struct ContourVerdict {
  Interval band;
  Polyline polyline;
  bool divides_plane = false;
  std::size_t bounded_region_count = 0;
  std::vector<std::size_t> region_cells;
  double resolution = 0.0;
  // Set when the raster decision disagrees with the exact self-intersection
  // count or a bounded region is only a few cells large, i.e. when the curve
  // approaches itself within the raster scale.
  bool conservative = false;
  std::size_t self_intersections = 0;
};

inline constexpr double kDefaultContourResolution = 1.0 / 256.0;

// f'(lambda) on `points` uniform nodes across the band, refined by bisection
// until consecutive points are at most resolution / 2 apart.
Polyline trace_contour(const SamplingScheme& scheme, Interval band, std::size_t points,
                       double resolution = kDefaultContourResolution);

// Rasterizes the polyline on [-1.2, 1.2]^2 with square cells of side
// `resolution`, flood-fills the complement from the window border and counts
// the 4-connected components it cannot reach. Throws ResolutionError for
// cells coarser than 1/64.
ContourVerdict divides_plane(const Polyline& polyline, double resolution);

// trace_contour + divides_plane over [-c pi / d, c pi / d].
ContourVerdict certify_band(const SamplingScheme& scheme, double c, std::size_t points,
                            double resolution = kDefaultContourResolution);

struct BandSearchResult {
  // Largest scanned c whose band does not divide the plane.
  std::optional<double> largest_alias_free;
  std::vector<std::pair<double, ContourVerdict>> verdicts;
};

// Scans c = step, 2 step, ... <= c_max.
BandSearchResult max_aliasfree_band(const SamplingScheme& scheme, double c_max,
                                    double step, std::size_t points = 1024,
                                    double resolution = kDefaultContourResolution);

// r(n) = integral of psd(lambda) Re f'(lambda)^n d lambda for n = 0..max_n,
// the covariance sequence of the sampled process (no 1 / 2 pi, matching the
// convention of SpectrumModel).
std::vector<double> sampled_covariance_sequence(const SpectrumModel& model,
                                                const SamplingScheme& scheme,
                                                std::size_t max_n);

double theoretical_sampled_covariance(const SpectrumModel& model,
                                      const SamplingScheme& scheme, std::size_t n);

}  // namespace irrspec
