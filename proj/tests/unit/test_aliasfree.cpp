#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "irrspec/aliasfree.hpp"
#include "irrspec/errors.hpp"
#include "irrspec/quadrature.hpp"

using namespace irrspec;
using std::numbers::pi;

namespace {

Polyline circle(std::size_t n, double radius = 1.0) {
  Polyline p;
  for (std::size_t k = 0; k <= n; ++k) {
    const double a = 2.0 * pi * static_cast<double>(k) / static_cast<double>(n);
    p.lambda.push_back(a);
    p.points.push_back(std::polar(radius, a));
  }
  return p;
}

}  // namespace

TEST_CASE("deterministic contour traces the unit circle") {
  const SamplingScheme s = make_deterministic(1.0);
  const Polyline p = trace_contour(s, {-pi, pi}, 256);
  for (const auto& z : p.points) CHECK(std::abs(z) == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t k = 1; k < p.size(); ++k) {
    CHECK(std::abs(p.points[k] - p.points[k - 1]) <= 0.5 * kDefaultContourResolution + 1e-15);
  }
  CHECK(p.lambda.front() == -pi);
  CHECK(p.lambda.back() == pi);
}

TEST_CASE("contours of symmetric bands are conjugation symmetric") {
  const SamplingScheme s = make_wide_band_two_point(1.0);
  const Polyline p = trace_contour(s, {-1.1 * pi, 1.1 * pi}, 512);
  const std::size_t n = p.size();
  for (std::size_t k = 0; k < n; ++k) {
    CHECK(std::abs(p.points[k] - std::conj(p.points[n - 1 - k])) < 1e-12);
    CHECK(std::abs(p.points[k]) <= 1.0 + 1e-14);
  }
}

TEST_CASE("raster verdicts on simple shapes") {
  const ContourVerdict c = divides_plane(circle(2000), 1.0 / 128.0);
  CHECK(c.divides_plane);
  CHECK(c.bounded_region_count == 1);

  Polyline arc;
  for (int k = 0; k <= 200; ++k) {
    const double a = pi * k / 200.0;
    arc.lambda.push_back(a);
    arc.points.push_back(std::polar(0.8, a));
  }
  const ContourVerdict open = divides_plane(arc, 1.0 / 128.0);
  CHECK(!open.divides_plane);
  CHECK(open.self_intersections == 0);
  CHECK(!open.conservative);

  // A figure eight closes two regions.
  Polyline eight;
  for (int k = 0; k < 4000; ++k) {
    const double t = 0.3 + 2.0 * pi * k / 4000.0;
    eight.lambda.push_back(t);
    eight.points.push_back({0.9 * std::sin(t), 0.5 * std::sin(2.0 * t)});
  }
  eight.lambda.push_back(0.3 + 2.0 * pi);
  eight.points.push_back(eight.points.front());
  const ContourVerdict two = divides_plane(eight, 1.0 / 256.0);
  CHECK(two.divides_plane);
  CHECK(two.bounded_region_count == 2);
  CHECK(two.self_intersections >= 1);

  CHECK_THROWS_AS(divides_plane(arc, 1.0 / 32.0), ResolutionError);
  CHECK_THROWS_AS(divides_plane(Polyline{}, 1.0 / 128.0), ParameterError);
}

TEST_CASE("canonical verdicts are stable under resolution halving") {
  for (double r : {1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0, 1.0 / 512.0}) {
    CHECK(certify_band(make_shifted_exponential(1.0, 1.0), 1.0, 1024, r).divides_plane);
    CHECK(!certify_band(make_wide_band_two_point(1.0), 1.1, 1024, r).divides_plane);
    CHECK(certify_band(make_deterministic(1.0), 1.0, 1024, r).divides_plane);
  }
  // The same holds with d != 1 since the verdict depends on lambda d only.
  CHECK(!certify_band(make_wide_band_two_point(0.5), 1.1, 1024).divides_plane);
  CHECK(certify_band(make_shifted_exponential(2.0, 2.0), 1.0, 1024).divides_plane);
}

TEST_CASE("band search") {
  const BandSearchResult det = max_aliasfree_band(make_deterministic(1.0), 1.2, 0.05);
  REQUIRE(det.largest_alias_free.has_value());
  CHECK(*det.largest_alias_free < 1.0);
  CHECK(*det.largest_alias_free >= 0.95 - 1e-9);
  for (const auto& [c, v] : det.verdicts) {
    if (c < 0.999) CHECK(!v.divides_plane);
    if (c > 1.001) CHECK(v.divides_plane);
  }
  const BandSearchResult two = max_aliasfree_band(make_wide_band_two_point(1.0), 1.2, 0.05);
  REQUIRE(two.largest_alias_free.has_value());
  CHECK(*two.largest_alias_free >= 1.1 - 1e-9);
  for (const SamplingScheme& s : {make_wide_band_two_point(1.0), make_shifted_exponential(1.0, 1.0),
                                  make_deterministic(1.0), make_two_point(1.0, 0.5, 1.0, 2.0)}) {
    const ContourVerdict v = certify_band(s, 0.05, 256, 1.0 / 512.0);
    CHECK(!v.divides_plane);
  }
  CHECK_THROWS_AS(max_aliasfree_band(make_deterministic(1.0), 1.0, 2.0), ParameterError);
}

TEST_CASE("sampled covariance sequence basics") {
  const SpectrumModel sim = make_simulation_spectrum();
  CHECK(theoretical_sampled_covariance(sim, make_shifted_exponential(1.0, 1.0), 0) ==
        doctest::Approx(sim.variance()).epsilon(1e-9));
  // Deterministic spacing: r(n) = C(n d).
  const auto det = sampled_covariance_sequence(sim, make_deterministic(1.0), 5);
  for (std::size_t n = 0; n <= 5; ++n) {
    CHECK(det[n] == doctest::Approx(covariance_from_psd(sim, static_cast<double>(n))).epsilon(1e-6).scale(1.0));
  }
  // Triangle of width d: every spacing is >= d so r(n) = 0 for n >= 1.
  const SpectrumModel tri = make_triangle_pair(1.0).model();
  const auto r = sampled_covariance_sequence(tri, make_shifted_exponential(1.0, 1.0), 10);
  CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t n = 1; n <= 10; ++n) CHECK(std::abs(r[n]) < 1e-9);
}

TEST_CASE("sampled covariance equals E[C(k-step spacing)]") {
  // Independent lag-domain oracle: r(n) = integral of C(u) g_n(u) du with g_n
  // the n-step spacing density (a shifted gamma for shifted-exponential).
  const SpectrumModel sim = make_simulation_spectrum();
  const SamplingScheme s = make_shifted_exponential(0.5, 1.0);
  const auto r = sampled_covariance_sequence(sim, s, 4);
  for (int n = 1; n <= 4; ++n) {
    const double shift = 0.5 * n;
    const auto rule = quad::gauss_legendre_panels({shift, shift + 80.0}, 800);
    const double oracle = rule.integrate([&](double u) {
      const double x = u - shift;
      const double density = std::pow(x, n - 1) * std::exp(-x) / std::tgamma(n);
      return sim.covariance(u) * density;
    });
    CHECK(r[static_cast<std::size_t>(n)] == doctest::Approx(oracle).epsilon(1e-7).scale(1.0));
  }
  // Atomic scheme: r(n) is a finite mixture of C values.
  const SamplingScheme two = make_wide_band_two_point(0.5);
  const auto r2 = sampled_covariance_sequence(sim, two, 3);
  for (unsigned n = 1; n <= 3; ++n) {
    double oracle = 0.0;
    for (const auto& atom : k_step_atoms(two, n)) oracle += atom.mass * sim.covariance(atom.location);
    CHECK(r2[n] == doctest::Approx(oracle).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("class-A members share sampled covariances under the constraint") {
  const SpectrumModel t1 = make_triangle_pair(1.0).model();
  const SpectrumModel t2 = make_triangle_pair(0.5).model();
  const SpectrumModel conv = convolve_class_a(make_triangle_pair(1.0), t1).model();
  for (const SamplingScheme& s : {make_shifted_exponential(1.0, 1.0), make_shifted_gamma(1.0, 2.0, 0.5),
                                  make_deterministic(1.0), make_wide_band_two_point(1.0)}) {
    const auto a = sampled_covariance_sequence(t1, s, 20);
    const auto b = sampled_covariance_sequence(t2, s, 20);
    const auto c = sampled_covariance_sequence(conv, s, 20);
    for (std::size_t n = 0; n <= 20; ++n) {
      CHECK_MESSAGE(std::abs(a[n] - b[n]) < 1e-8, s.id() << " n=" << n);
      CHECK_MESSAGE(std::abs(a[n] - c[n]) < 1e-6, s.id() << " n=" << n);
    }
  }
  // Poisson sampling separates them: r(1) = E[C(S)] with S ~ Exp(1).
  const SamplingScheme poisson = make_poisson(1.0);
  CHECK(theoretical_sampled_covariance(t1, poisson, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-7));
  CHECK(theoretical_sampled_covariance(t2, poisson, 1) ==
        doctest::Approx(1.0 - 2.0 * (1.0 - std::exp(-0.5))).epsilon(1e-7));
}

TEST_CASE("sampled covariance sequences are positive semidefinite") {
  const std::vector<SpectrumModel> models = {make_simulation_spectrum(), make_triangle_pair(1.0).model()};
  for (const SpectrumModel& m : models) {
    for (const SamplingScheme& s : {make_shifted_exponential(1.0, 1.0), make_poisson(1.0),
                                    make_wide_band_two_point(1.0), make_deterministic(1.0)}) {
      const auto r = sampled_covariance_sequence(m, s, 20);
      Eigen::MatrixXd g(21, 21);
      for (int i = 0; i < 21; ++i) {
        for (int j = 0; j < 21; ++j) g(i, j) = r[static_cast<std::size_t>(std::abs(i - j))];
      }
      const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().minCoeff();
      CHECK_MESSAGE(min_eig >= -1e-8 * r[0], m.id() << " " << s.id());
    }
  }
}
