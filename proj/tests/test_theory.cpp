#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gt/theory.hpp"
#include "testutil.hpp"

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kE = std::numbers::e;

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("binary entropy basics") {
  CHECK(gt::binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gt::binary_entropy(0.0) == 0.0);
  CHECK(gt::binary_entropy(1.0) == 0.0);
  CHECK(gt::binary_entropy(0.11) == doctest::Approx(0.499915958164528).epsilon(1e-12));
  CHECK(gt::binary_entropy(0.25) == gt::binary_entropy(0.75));
  CHECK_THROWS_AS(gt::binary_entropy(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(gt::binary_entropy(1.1), std::invalid_argument);
}

TEST_CASE("log2 binomial exact values") {
  CHECK(gt::log2_binomial(4, 2) == doctest::Approx(std::log2(6.0)).epsilon(1e-14));
  CHECK(gt::log2_binomial(52, 5) == doctest::Approx(std::log2(2598960.0)).epsilon(1e-14));
  CHECK(gt::log2_binomial(500, 10) == doctest::Approx(67.73610896188313).epsilon(1e-12));
  CHECK(gt::log2_binomial(10, 0) == 0.0);
  CHECK(gt::log2_binomial(10, 10) == 0.0);
  CHECK(gt::log2_binomial(0, 0) == 0.0);
  CHECK(gt::log2_binomial(100, 30) == gt::log2_binomial(100, 70));
  CHECK(std::exp2(gt::log2_binomial(20, 7)) == doctest::Approx(77520.0).epsilon(1e-10));
  CHECK_THROWS_AS(gt::log2_binomial(10, 11), std::invalid_argument);
  CHECK_THROWS_AS(gt::log2_binomial(10, -1), std::invalid_argument);
}

TEST_CASE("log2 binomial is consistent across the big-integer/log-gamma seam") {
  // C(1001, k) / C(1000, k) = 1001 / (1001 - k) links the two code paths.
  for (int64_t k : {1, 10, 100, 500}) {
    const double lhs = gt::log2_binomial(1001, k) - gt::log2_binomial(1000, k);
    const double rhs = std::log2(1001.0 / static_cast<double>(1001 - k));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("rate and counting bound on reference points") {
  CHECK(gt::rate(500, 10, 136.0) == doctest::Approx(0.4980596247197289).epsilon(1e-12));
  CHECK(gt::counting_bound(500, 10, 60.0) == doctest::Approx(0.004690284133919195).epsilon(1e-9));
  CHECK(gt::counting_bound(4, 2, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(gt::counting_bound(500, 10, 500.0) == 1.0);
  CHECK(gt::counting_bound(500, 10, 68.0) == 1.0);
  CHECK(gt::counting_bound(500, 10, 67.0) < 1.0);
  CHECK_THROWS_AS(gt::rate(500, 10, 0.0), std::invalid_argument);
}

TEST_CASE("bernoulli capacity equals one in the sparse regime") {
  for (double theta : {0.05, 0.1, 0.2, 0.3, 1.0 / 3.0}) {
    CHECK(gt::bernoulli_capacity(theta) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("bernoulli capacity in the dense regime") {
  // Above the crossover the binding term is (nu e^-nu / ln 2)(1-theta)/theta
  // maximised at nu = 1.
  CHECK(gt::bernoulli_capacity(0.9) == doctest::Approx(0.058970871713671436).epsilon(1e-6));
  CHECK(gt::bernoulli_capacity(0.5) == doctest::Approx(1.0 / (kE * kLn2)).epsilon(1e-6));
  CHECK(gt::bernoulli_capacity(0.8) ==
        doctest::Approx(0.25 / (kE * kLn2)).epsilon(1e-6));
  CHECK_THROWS_AS(gt::bernoulli_capacity(0.0), std::invalid_argument);
  CHECK_THROWS_AS(gt::bernoulli_capacity(1.0), std::invalid_argument);
}

TEST_CASE("bernoulli capacity matches a dense grid oracle") {
  // Independent maximisation on a fine fixed grid.
  for (double theta : {0.4, 0.6, 0.75, 0.9}) {
    double best = 0.0;
    for (int i = 1; i <= 100000; ++i) {
      const double nu = 1e-4 * i;
      const double t1 = nu * std::exp(-nu) / kLn2 * (1.0 - theta) / theta;
      const double t2 = gt::binary_entropy(std::exp(-nu));
      best = std::max(best, std::min(t1, t2));
    }
    CHECK(gt::bernoulli_capacity(theta) == doctest::Approx(best).epsilon(1e-5));
  }
}

TEST_CASE("comp rates and their constant ratio") {
  CHECK(gt::comp_bernoulli_rate(0.5) == doctest::Approx(0.5 / (kE * kLn2)).epsilon(1e-14));
  CHECK(gt::comp_ccw_rate(0.5) == doctest::Approx(0.5 * kLn2).epsilon(1e-14));
  for (int i = 1; i <= 10; ++i) {
    const double theta = i / 11.0;
    const double ratio = gt::comp_ccw_rate(theta) / gt::comp_bernoulli_rate(theta);
    CHECK(ratio == doctest::Approx(1.3060066971622275).epsilon(1e-12));
    CHECK(ratio == doctest::Approx(kE * kLn2 * kLn2).epsilon(1e-12));
  }
}

TEST_CASE("general-nu comp ccw rate peaks at nu = ln 2") {
  const double theta = 0.4;
  CHECK(gt::comp_ccw_rate_at(theta, kLn2) == doctest::Approx(gt::comp_ccw_rate(theta)).epsilon(1e-12));
  double best_nu = 0.0;
  double best = 0.0;
  for (int i = 1; i <= 400; ++i) {
    const double nu = 0.005 * i;
    const double r = gt::comp_ccw_rate_at(theta, nu);
    CHECK(r <= gt::comp_ccw_rate(theta) + 1e-12);
    if (r > best) {
      best = r;
      best_nu = nu;
    }
  }
  CHECK(best_nu == doctest::Approx(kLn2).epsilon(0.01));
}

TEST_CASE("ccw converse value and crossover") {
  CHECK(gt::ccw_converse(0.5) == doctest::Approx(kLn2).epsilon(1e-14));
  CHECK(gt::ccw_converse(0.8) == doctest::Approx(kLn2 * 0.25).epsilon(1e-12));
  const double theta0 = kLn2 / (1.0 + kLn2);  // 0.409379...
  CHECK(gt::ccw_converse(theta0 - 1e-3) == 1.0);
  CHECK(gt::ccw_converse(theta0 + 1e-3) < 1.0);
  CHECK(gt::ccw_converse(0.3) == 1.0);
}

TEST_CASE("ccw comp overtakes the bernoulli capacity at theta about 0.766") {
  // Root of comp_ccw_rate - bernoulli_capacity by bisection.
  double lo = 0.5;
  double hi = 0.95;
  auto f = [](double theta) { return gt::comp_ccw_rate(theta) - gt::bernoulli_capacity(theta); };
  REQUIRE(f(lo) < 0.0);
  REQUIRE(f(hi) > 0.0);
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  const double crossover = 0.5 * (lo + hi);
  CHECK(crossover == doctest::Approx(1.0 / (kE * kLn2 * kLn2)).epsilon(1e-6));
  CHECK(crossover == doctest::Approx(0.7656928576266377).epsilon(1e-6));
  CHECK(1.0 - crossover == doctest::Approx(0.23430714239608252).epsilon(1e-5));
}

TEST_CASE("test count thresholds") {
  CHECK(gt::t_star_comp(500, 10) == doctest::Approx(129.34892525162195).epsilon(1e-12));
  CHECK(gt::t_star_comp(1024, 10) == doctest::Approx(144.26950408889635).epsilon(1e-12));
  CHECK(gt::t_star_comp(10000, 10) == doctest::Approx(191.7011675473488).epsilon(1e-12));
  CHECK(gt::t_star_comp(2, 1) == doctest::Approx(1.0 / kLn2).epsilon(1e-14));
  CHECK(gt::t_star_converse(500, 10) == doctest::Approx(56.43856189774724).epsilon(1e-12));
  CHECK(gt::t_star_converse(2000, 100) == doctest::Approx(958.5058377367438).epsilon(1e-12));
  CHECK_THROWS_AS(gt::t_star_comp(10, 0), std::invalid_argument);
  CHECK_THROWS_AS(gt::t_star_converse(10, 11), std::invalid_argument);
}

TEST_CASE("comp needs more tests than the universal converse allows") {
  gt::SplitMix64 rng(8);
  for (int rep = 0; rep < 3000; ++rep) {
    const int64_t n = 2 + static_cast<int64_t>(rng.uniform_below(999999));
    const int64_t k = 1 + static_cast<int64_t>(rng.uniform_below(static_cast<uint64_t>(n - 1)));
    CHECK(gt::t_star_comp(n, k) >= gt::t_star_converse(n, k) - 1e-9);
  }
}

TEST_CASE("coupon expectation closed form") {
  CHECK(gt::coupon_expected_distinct(2, 2) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(gt::coupon_expected_distinct(1, 5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gt::coupon_expected_distinct(7, 0) == 0.0);
  CHECK(gt::coupon_expected_distinct(100, 7) == doctest::Approx(6.793465209301).epsilon(1e-9));
}

TEST_CASE("coupon expectation matches exhaustive enumeration on tiny cases") {
  for (int t = 1; t <= 4; ++t) {
    for (int c = 0; c <= 4; ++c) {
      CHECK(gt::coupon_expected_distinct(t, c) ==
            doctest::Approx(testutil::coupon_mean_exhaustive(t, c)).epsilon(1e-12));
    }
  }
}

TEST_CASE("coupon concentration bound") {
  CHECK(gt::coupon_concentration_bound(100.0, 0.5, 0.1) ==
        doctest::Approx(0.2706705664732254).epsilon(1e-12));
  CHECK(gt::coupon_concentration_bound(2.0, 0.5, 0.01) == 1.0);  // clipped
  CHECK_THROWS_AS(gt::coupon_concentration_bound(0.0, 0.5, 0.1), std::invalid_argument);
}

TEST_CASE("comp success probability given m positive tests") {
  CHECK(gt::comp_success_given_m(5, 10, 2, 3) == doctest::Approx(0.421875).epsilon(1e-15));
  CHECK(gt::comp_success_given_m(0, 10, 3, 100) == 1.0);
  CHECK(gt::comp_success_given_m(10, 10, 3, 100) == 0.0);
  CHECK(gt::comp_success_given_m(5, 10, 3, 0) == 1.0);
  double prev = 1.0;
  for (int64_t m = 0; m <= 20; ++m) {
    const double cur = gt::comp_success_given_m(m, 20, 3, 50);
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }
  CHECK_THROWS_AS(gt::comp_success_given_m(11, 10, 2, 3), std::invalid_argument);
}

TEST_CASE("theory curves csv shape and first row") {
  const std::string csv = gt::theory_curves_csv(0.01, 0.99, 0.01);
  CHECK(count_lines(csv) == 100);  // header plus 99 grid points
  std::istringstream in(csv);
  std::string header, first;
  std::getline(in, header);
  CHECK(header == "theta,bernoulli_capacity,comp_bernoulli,comp_ccw,ccw_converse,counting");
  std::getline(in, first);
  CHECK(first.substr(0, 9) == "0.010000,");
  const std::string single = gt::theory_curves_csv(0.3, 0.35, 0.1);
  CHECK(count_lines(single) == 2);
  CHECK_THROWS_AS(gt::theory_curves_csv(0.5, 0.4, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(gt::theory_curves_csv(0.0, 0.5, 0.01), std::invalid_argument);
}
