#include "haekit/error.hpp"
#include "haekit/rng.hpp"
#include "haekit/stats.hpp"

#include <doctest.h>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace haekit;

namespace {

Eigen::ArrayXd random_array(Xorshift64Star& rng, int n, double lo, double hi) {
  Eigen::ArrayXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

}  // namespace

TEST_CASE("stats: mean and sd agree with long-double accumulation") {
  Xorshift64Star rng(201);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(64));
    const Eigen::ArrayXd v = random_array(rng, n, -1e4, 1e4);

    long double sum = 0.0L;
    for (int i = 0; i < n; ++i) sum += v[i];
    const long double m = sum / n;
    long double ss = 0.0L;
    for (int i = 0; i < n; ++i) ss += (v[i] - m) * (v[i] - m);
    const double sd_want = static_cast<double>(std::sqrt(ss / (n - 1)));

    CHECK(mean(v) == doctest::Approx(static_cast<double>(m)).epsilon(1e-12));
    CHECK(sample_sd(v) == doctest::Approx(sd_want).epsilon(1e-10));
  }
}

TEST_CASE("stats: quantile matches the linear order-statistic rule") {
  Xorshift64Star rng(202);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_below(40));
    const Eigen::ArrayXd v = random_array(rng, n, -50.0, 50.0);
    const double p = rng.next_double();

    std::vector<double> sorted(v.data(), v.data() + n);
    std::sort(sorted.begin(), sorted.end());
    const double h = (n - 1) * p;
    const int lo = static_cast<int>(std::floor(h));
    const int hi = std::min(lo + 1, n - 1);
    const double want = sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);

    CHECK(quantile(v, p) == doctest::Approx(want).epsilon(1e-12));
    CHECK(quantile(v, 0.0) == sorted.front());
    CHECK(quantile(v, 1.0) == sorted.back());
  }
}

TEST_CASE("stats: quantile is monotone in p") {
  Xorshift64Star rng(203);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(30));
    const Eigen::ArrayXd v = random_array(rng, n, -10.0, 10.0);
    double p1 = rng.next_double(), p2 = rng.next_double();
    if (p1 > p2) std::swap(p1, p2);
    CHECK(quantile(v, p1) <= quantile(v, p2) + 1e-12);
  }
}

TEST_CASE("stats: shape measures vanish on tiny or flat inputs") {
  Eigen::ArrayXd flat(5);
  flat.setConstant(3.25);
  CHECK(skewness(flat) == 0.0);
  CHECK(excess_kurtosis(flat) == 0.0);

  Eigen::ArrayXd two(2);
  two << 1.0, 2.0;
  CHECK(skewness(two) == 0.0);

  Eigen::ArrayXd three(3);
  three << 1.0, 2.0, 3.0;
  CHECK(excess_kurtosis(three) == 0.0);
  CHECK(skewness(three) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("stats: skewness sign tracks the longer tail") {
  Eigen::ArrayXd right(5);
  right << 1.0, 1.1, 1.2, 1.3, 9.0;
  CHECK(skewness(right) > 0.0);
  Eigen::ArrayXd left(5);  // exact mirror of `right`
  left << -9.0, -1.3, -1.2, -1.1, -1.0;
  CHECK(skewness(left) < 0.0);
  CHECK(skewness(right) == doctest::Approx(-skewness(left)).epsilon(1e-12));
}

TEST_CASE("stats: empty input and bad probabilities reject") {
  Eigen::ArrayXd empty(0);
  CHECK_THROWS_AS(mean(empty), Error);
  CHECK_THROWS_AS(quantile(empty, 0.5), Error);
  Eigen::ArrayXd v(3);
  v << 1.0, 2.0, 3.0;
  CHECK_THROWS_AS(quantile(v, -0.1), Error);
  CHECK_THROWS_AS(quantile(v, 1.1), Error);
}
