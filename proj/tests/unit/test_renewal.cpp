#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "irrspec/errors.hpp"
#include "irrspec/renewal.hpp"
#include "irrspec/rng.hpp"

using namespace irrspec;

TEST_CASE("shifted-exponential renewal density") {
  const SamplingScheme s = make_shifted_exponential(1.0, 1.0);
  const RenewalDensityTable table = renewal_density(s);
  CHECK(table.at(0.5) == 0.0);
  CHECK(table.at(0.999) == 0.0);
  CHECK(table.at(40.0) == doctest::Approx(0.5).epsilon(0.02));
  // Below 2d only the first term contributes.
  CHECK(table.at(1.5) == doctest::Approx(std::exp(-0.5)).epsilon(1e-3));
  // Between 2d and 3d: f(u) + f*f(u) = e^{-(u-1)} + (u-2) e^{-(u-2)}.
  const double u = 2.5;
  CHECK(table.at(u) == doctest::Approx(std::exp(-(u - 1)) + (u - 2) * std::exp(-(u - 2))).epsilon(2e-3));
  for (double v : table.values) CHECK(v >= 0.0);
  CHECK(table.tail_bound < 1e-9);
}

TEST_CASE("Poisson renewal density is flat") {
  const RenewalDensityTable table = renewal_density(make_poisson(2.0));
  for (double u : {0.3, 1.0, 10.0, 80.0}) CHECK(table.at(u) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("renewal density matches simulated counts") {
  const SamplingScheme s = make_shifted_gamma(0.5, 2.0, 0.5);
  const RenewalDensityTable table = renewal_density(s, 20.0, 0.005);
  // integral of h over [0, 20] = expected number of renewals in (0, 20].
  double integral = 0.0;
  for (std::size_t k = 0; k < table.values.size(); ++k) {
    const double w = (k == 0 || k + 1 == table.values.size()) ? 0.5 : 1.0;
    integral += w * table.values[k] * table.step;
  }
  Rng rng(31);
  const int runs = 20000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int r = 0; r < runs; ++r) {
    double t = 0.0;
    int count = 0;
    while (true) {
      t += s.draw_spacing(rng);
      if (t > 20.0) break;
      ++count;
    }
    sum += count;
    sum_sq += static_cast<double>(count) * count;
  }
  const double mean = sum / runs;
  const double se = std::sqrt((sum_sq / runs - mean * mean) / runs);
  CHECK(std::abs(integral - mean) <= 3.0 * se + 5e-3);
}

TEST_CASE("resolution and family errors") {
  const SamplingScheme s = make_shifted_exponential(1.0, 1.0);
  CHECK_THROWS_AS(renewal_density(s, 50.0, 0.2), ResolutionError);
  CHECK_THROWS_AS(renewal_density(make_deterministic(1.0)), UnsupportedError);
  CHECK_THROWS_AS(renewal_density(make_wide_band_two_point(1.0)), UnsupportedError);
}

TEST_CASE("reduced covariance density") {
  const SamplingScheme s = make_shifted_exponential(1.0, 1.0);
  const RenewalDensityTable table = renewal_density(s);
  const double beta = 0.5;
  CHECK(reduced_covariance_density(table, 0.4) == doctest::Approx(-beta * beta));
  CHECK(reduced_covariance_density(table, -0.4) == doctest::Approx(-beta * beta));
  CHECK(std::abs(reduced_covariance_density(table, 90.0)) <= 0.02 * beta * beta);
  CHECK(reduced_covariance_atom(s) == beta);
}

TEST_CASE("renewal atoms of atomic schemes") {
  const auto atoms = renewal_atoms(make_deterministic(1.0), 5.0);
  REQUIRE(atoms.size() == 5);
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    CHECK(atoms[k].location == doctest::Approx(static_cast<double>(k + 1)));
    CHECK(atoms[k].mass == doctest::Approx(1.0));
  }
  double mass = 0.0;
  for (const auto& a : renewal_atoms(make_wide_band_two_point(1.0), 60.0)) mass += a.mass;
  // About 60 / 1.352 renewals on (0, 60].
  CHECK(mass == doctest::Approx(60.0 / 1.352).epsilon(0.03));
}

TEST_CASE("assumption B1") {
  for (const SamplingScheme& s : {make_shifted_exponential(1.0, 1.0), make_shifted_exponential(0.5, 2.0),
                                  make_shifted_gamma(1.0, 2.0, 0.5), make_deterministic(1.0),
                                  make_wide_band_two_point(1.0)}) {
    const B1Verdict v = check_assumption_b1(s);
    CHECK_MESSAGE(!v.holds, s.id());
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->lo >= 0.0);
    CHECK(v.witness->hi <= s.min_spacing());
    CHECK(v.witness->hi > v.witness->lo);
  }
  const B1Verdict v = check_assumption_b1(make_shifted_exponential(1.0, 1.0));
  CHECK(v.witness->lo == 0.0);
  CHECK(v.witness->hi == doctest::Approx(1.0));
  const B1Verdict poisson = check_assumption_b1(make_poisson(1.0));
  CHECK(poisson.holds);
  CHECK(!poisson.witness.has_value());
}
