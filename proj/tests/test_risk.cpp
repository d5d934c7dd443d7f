#include "haekit/error.hpp"
#include "haekit/risk.hpp"
#include "haekit/rng.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace haekit;

namespace {

/// Histogram whose bin densities sample a Gaussian pdf; mass renormalized.
/// The quadrature strides the staircase at sigma/100, so its error scales
/// with bin width; this bin count keeps the worst overlap deviation near
/// 2e-4, safely inside the 1e-3 the tests assert.
ErrorModel gaussian_histogram(double mu, double sigma, int bins = 40000) {
  const double lo = mu - 8.0 * sigma, hi = mu + 8.0 * sigma;
  Eigen::ArrayXd edges = Eigen::ArrayXd::LinSpaced(bins + 1, lo, hi);
  Eigen::ArrayXd densities(bins);
  const double w = (hi - lo) / bins;
  for (int i = 0; i < bins; ++i) {
    const double z = lo + (i + 0.5) * w;
    densities[i] = std::exp(-(z - mu) * (z - mu) / (2.0 * sigma * sigma));
  }
  densities /= densities.sum() * w;
  return make_empirical(std::move(edges), std::move(densities));
}

}  // namespace

TEST_CASE("risk: unit Gaussians at zero separation overlap at 1/(2 sqrt(pi))") {
  const ErrorModel g = make_gaussian(0.0, 1.0);
  const double want = 1.0 / (2.0 * std::sqrt(std::numbers::pi));
  CHECK(std::fabs(overlap_density(g, g, 0.0) - want) <= 1e-9);
}

TEST_CASE("risk: quadrature agrees with the Gaussian closed form to 1e-3 relative") {
  Xorshift64Star rng(601);
  for (int trial = 0; trial < 1000; ++trial) {
    // Sigma ratio within 3x so the 8-sigma support windows keep the product
    // mass inside the integration range at the deepest separations.
    const double s1 = rng.uniform(0.5, 8.0);
    const double s2 = s1 * rng.uniform(1.0 / 3.0, 3.0);
    const ErrorModel m1 = make_gaussian(0.0, s1);
    const ErrorModel m2 = make_gaussian(0.0, s2);
    const double sigma_d = std::hypot(s1, s2);
    const double separation = rng.uniform(0.0, 10.0) * sigma_d / std::sqrt(2.0);
    const double closed = overlap_density(m1, m2, separation);
    const double quad = overlap_density_quadrature(m1, m2, separation);
    if (closed > 1e-300) CHECK(std::fabs(quad - closed) / closed <= 1e-3);
  }
}

TEST_CASE("risk: histogram models reproduce Gaussian overlap within 1e-3") {
  Xorshift64Star rng(602);
  for (int trial = 0; trial < 30; ++trial) {
    const double s1 = rng.uniform(1.0, 6.0);
    const double s2 = rng.uniform(1.0, 6.0);
    const ErrorModel g1 = make_gaussian(0.0, s1);
    const ErrorModel g2 = make_gaussian(0.0, s2);
    const ErrorModel h1 = gaussian_histogram(0.0, s1);
    const ErrorModel h2 = gaussian_histogram(0.0, s2);
    const double separation = rng.uniform(0.0, 3.0) * std::hypot(s1, s2);
    const double closed = overlap_density(g1, g2, separation);
    CHECK(std::fabs(overlap_density(h1, h2, separation) - closed) / closed <= 1e-3);
    CHECK(std::fabs(overlap_density(h1, g2, separation) - closed) / closed <= 1e-3);
  }
}

TEST_CASE("risk: tail probability matches direct density integration") {
  Xorshift64Star rng(603);
  for (int trial = 0; trial < 1000; ++trial) {
    const double s1 = rng.uniform(0.5, 10.0);
    const double s2 = rng.uniform(0.5, 10.0);
    const double sigma_d = std::hypot(s1, s2);
    const double separation = rng.uniform(0.0, 6.0) * sigma_d;
    const ErrorModel m1 = make_gaussian(0.0, s1);
    const ErrorModel m2 = make_gaussian(0.0, s2);
    const double got = tail_probability(m1, m2, separation);
    const double want = oracles::gaussian_tail_by_integration(sigma_d, separation);
    CHECK(std::fabs(got - want) / want <= 0.01);
  }
}

TEST_CASE("risk: tail probability is 1 at zero separation and decreasing") {
  const ErrorModel m1 = make_gaussian(0.0, 3.0);
  const ErrorModel m2 = make_gaussian(0.0, 4.0);
  CHECK(tail_probability(m1, m2, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  double prev = 2.0;
  for (double s = 0.0; s <= 50.0; s += 2.5) {
    const double p = tail_probability(m1, m2, s);
    CHECK(p <= prev + 1e-15);
    prev = p;
  }
  CHECK_THROWS_AS(tail_probability(m1, m2, -1.0), Error);
}

TEST_CASE("risk: empirical tails match the Gaussian pair at moderate depths") {
  const ErrorModel g1 = make_gaussian(0.0, 3.0);
  const ErrorModel g2 = make_gaussian(0.0, 4.0);
  const ErrorModel h1 = gaussian_histogram(0.0, 3.0, 800);
  const ErrorModel h2 = gaussian_histogram(0.0, 4.0, 800);
  for (double s = 0.0; s <= 10.0; s += 2.0) {
    const double want = tail_probability(g1, g2, s);
    CHECK(std::fabs(tail_probability(h1, h2, s) - want) / want <= 0.01);
  }
}

TEST_CASE("risk: quantile matches bisection against the erfc CDF to 1e-9") {
  Xorshift64Star rng(604);
  CHECK(normal_quantile(0.5) == 0.0);
  // Lower half, log-uniform down to the deep tail: here the probability
  // argument carries full relative precision, so the bisection oracle is well
  // posed to far below 1e-9.
  for (int trial = 0; trial < 1000; ++trial) {
    const double p = std::pow(10.0, -rng.uniform(0.302, 11.9));
    const double got = normal_quantile(p);
    const double want = oracles::quantile_by_bisection(normal_cdf, p);
    CHECK(std::fabs(got - want) <= 1e-9);
  }
  // Upper half by antisymmetry, in the bulk where the complement double is
  // itself accurate enough to define the answer to 1e-9.
  for (int trial = 0; trial < 1000; ++trial) {
    const double p = rng.uniform(0.001, 0.4999);
    CHECK(std::fabs(normal_quantile(1.0 - p) + normal_quantile(p)) <= 1e-9);
  }
  CHECK_THROWS_AS(normal_quantile(0.0), Error);
  CHECK_THROWS_AS(normal_quantile(1.0), Error);
  CHECK_THROWS_AS(normal_quantile(-0.2), Error);
}

TEST_CASE("risk: safety factor inverts the two-sided tail") {
  Xorshift64Star rng(605);
  CHECK(safety_factor(1e-7) >= 5.25);
  CHECK(safety_factor(1e-7) <= 5.40);
  for (int trial = 0; trial < 1000; ++trial) {
    const double tls = std::pow(10.0, -rng.uniform(0.35, 9.0));
    const double lambda = safety_factor(tls);
    // P(|Z| >= lambda) for a standard normal recovers the TLS.
    const double two_sided = std::erfc(lambda / std::sqrt(2.0));
    CHECK(std::fabs(two_sided - tls) / tls <= 1e-6);
  }
  CHECK_THROWS_AS(safety_factor(0.0), Error);
  CHECK_THROWS_AS(safety_factor(0.5), Error);
  CHECK_THROWS_AS(safety_factor(1.0), Error);
}

TEST_CASE("risk: required separation scales with the combined sigma") {
  Xorshift64Star rng(606);
  for (int trial = 0; trial < 1000; ++trial) {
    const double s1 = rng.uniform(0.1, 20.0);
    const double s2 = rng.uniform(0.1, 20.0);
    const double tls = std::pow(10.0, -rng.uniform(1.0, 8.0));
    const double vsm = required_vsm(s1, s2, tls);
    CHECK(vsm == doctest::Approx(safety_factor(tls) * std::hypot(s1, s2)).epsilon(1e-12));
    // The achieved tail at the required separation equals the TLS.
    const double tail =
        tail_probability(make_gaussian(0.0, s1), make_gaussian(0.0, s2), vsm);
    CHECK(std::fabs(tail - tls) / tls <= 1e-6);
  }
  CHECK_THROWS_AS(required_vsm(0.0, 1.0, 1e-7), Error);
  CHECK_THROWS_AS(required_vsm(1.0, -1.0, 1e-7), Error);
}

TEST_CASE("risk: flight level counts") {
  CHECK(flight_levels(1000.0, 32.0) == 31);
  CHECK(flight_levels(1000.0, 6.0) == 166);
  CHECK(flight_levels(64.0, 32.0) == 2);
  CHECK_THROWS_AS(flight_levels(0.0, 32.0), Error);
  CHECK_THROWS_AS(flight_levels(1000.0, 0.0), Error);

  Xorshift64Star rng(607);
  for (int trial = 0; trial < 1000; ++trial) {
    const double ceiling = rng.uniform(1.0, 5000.0);
    const double vsm = rng.uniform(0.5, 200.0);
    const std::int64_t n = flight_levels(ceiling, vsm);
    CHECK(static_cast<double>(n) * vsm <= ceiling);
    CHECK(static_cast<double>(n + 1) * vsm > ceiling);
  }
}

TEST_CASE("risk: separation analysis keeps formula and override apart") {
  const SeparationAnalysis formula = analyze_separation(3.98, 3.98, 1e-7, 1000.0);
  CHECK(formula.vsm_m == formula.vsm_formula_m);
  CHECK_FALSE(formula.vsm_overridden);
  CHECK(formula.lambda == doctest::Approx(safety_factor(1e-7)).epsilon(1e-15));
  CHECK(formula.vsm_formula_m ==
        doctest::Approx(formula.lambda * std::hypot(3.98, 3.98)).epsilon(1e-15));
  CHECK(formula.flight_levels == 33);

  const SeparationAnalysis forced = analyze_separation(3.98, 3.98, 1e-7, 1000.0, 32.0);
  CHECK(forced.vsm_overridden);
  CHECK(forced.vsm_m == 32.0);
  CHECK(forced.vsm_formula_m == formula.vsm_formula_m);
  CHECK(forced.flight_levels == 31);

  const SeparationAnalysis narrow = analyze_separation(3.98, 3.98, 1e-7, 1000.0, 6.0);
  CHECK(narrow.flight_levels == 166);
}

TEST_CASE("risk: model constructors validate their parameters") {
  CHECK_THROWS_AS(make_gaussian(0.0, 0.0), Error);
  CHECK_THROWS_AS(make_gaussian(0.0, -1.0), Error);

  Eigen::ArrayXd edges(3), densities(2);
  edges << 0.0, 1.0, 2.0;
  densities << 0.5, 0.5;
  CHECK_NOTHROW(make_empirical(edges, densities));

  Eigen::ArrayXd bad_edges(3);
  bad_edges << 0.0, 2.0, 1.0;  // not ascending
  CHECK_THROWS_AS(make_empirical(bad_edges, densities), Error);

  Eigen::ArrayXd negative(2);
  negative << 1.2, -0.2;
  CHECK_THROWS_AS(make_empirical(edges, negative), Error);

  Eigen::ArrayXd off_mass(2);
  off_mass << 0.5, 0.4;  // integrates to 0.9
  try {
    make_empirical(edges, off_mass);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateModel);
  }
}

TEST_CASE("risk: histogram moments follow the piecewise-constant density") {
  // Uniform on [0, 2): mean 1, variance 4/12.
  Eigen::ArrayXd edges(3), densities(2);
  edges << 0.0, 1.0, 2.0;
  densities << 0.5, 0.5;
  const ErrorModel m = make_empirical(edges, densities);
  CHECK(model_mean(m) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(model_sigma(m) == doctest::Approx(std::sqrt(4.0 / 12.0)).epsilon(1e-12));
  CHECK(density_at(m, 0.5) == 0.5);
  CHECK(density_at(m, 2.0) == 0.5);   // topmost bin closes on the right
  CHECK(density_at(m, 2.01) == 0.0);
  CHECK(density_at(m, -0.01) == 0.0);
}
