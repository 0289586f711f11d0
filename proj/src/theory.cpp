#include "gt/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace gt {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kE = std::numbers::e;

void check_nk(int64_t n, int64_t k, const char* who) {
  if (n < 0 || k < 0 || k > n) throw std::invalid_argument(std::string(who) + ": need 0 <= k <= n");
}

void check_theta(double theta, const char* who) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument(std::string(who) + ": theta must lie in (0,1)");
}

double log2_cpp_int(const boost::multiprecision::cpp_int& v) {
  const unsigned bits = boost::multiprecision::msb(v);
  if (bits <= 52) return std::log2(v.convert_to<double>());
  const boost::multiprecision::cpp_int top = v >> (bits - 52);
  return static_cast<double>(bits - 52) + std::log2(top.convert_to<double>());
}

}  // namespace

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binary_entropy: p must lie in [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double log2_binomial(int64_t n, int64_t k) {
  check_nk(n, k, "log2_binomial");
  if (k == 0 || k == n) return 0.0;
  if (n <= 1000) {
    boost::multiprecision::cpp_int c = 1;
    const int64_t kk = std::min(k, n - k);
    for (int64_t i = 1; i <= kk; ++i) {
      c *= n - kk + i;
      c /= i;  // exact: C(n-kk+i, i) is integral
    }
    return log2_cpp_int(c);
  }
  return (std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
          std::lgamma(static_cast<double>(n - k) + 1.0)) /
         kLn2;
}

double rate(int64_t n, int64_t k, double num_tests) {
  check_nk(n, k, "rate");
  if (!(num_tests > 0.0)) throw std::invalid_argument("rate: need a positive test count");
  return log2_binomial(n, k) / num_tests;
}

double counting_bound(int64_t n, int64_t k, double num_tests) {
  check_nk(n, k, "counting_bound");
  if (num_tests < 0.0) throw std::invalid_argument("counting_bound: negative test count");
  return std::min(1.0, std::exp2(num_tests - log2_binomial(n, k)));
}

double bernoulli_capacity(double theta) {
  check_theta(theta, "bernoulli_capacity");
  const double density_ratio = (1.0 - theta) / theta;
  auto objective = [&](double nu) {
    const double reliability = (nu * std::exp(-nu) / kLn2) * density_ratio;
    const double information = binary_entropy(std::exp(-nu));
    return std::min(reliability, information);
  };
  // Coarse grid then ternary refinement around the best bracket.
  double best_nu = 0.01;
  double best = objective(best_nu);
  for (int i = 2; i <= 1000; ++i) {
    const double nu = 0.01 * i;
    const double v = objective(nu);
    if (v > best) {
      best = v;
      best_nu = nu;
    }
  }
  double lo = std::max(1e-9, best_nu - 0.01);
  double hi = best_nu + 0.01;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (objective(m1) < objective(m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  return std::max(best, objective(0.5 * (lo + hi)));
}

double comp_bernoulli_rate(double theta) {
  check_theta(theta, "comp_bernoulli_rate");
  return (1.0 - theta) / (kE * kLn2);
}

double comp_ccw_rate(double theta) {
  check_theta(theta, "comp_ccw_rate");
  return kLn2 * (1.0 - theta);
}

double comp_ccw_rate_at(double theta, double nu) {
  check_theta(theta, "comp_ccw_rate_at");
  if (!(nu > 0.0)) throw std::invalid_argument("comp_ccw_rate_at: nu must be positive");
  return -nu * std::log2(1.0 - std::exp(-nu)) * (1.0 - theta);
}

double ccw_converse(double theta) {
  check_theta(theta, "ccw_converse");
  return std::min(1.0, kLn2 * (1.0 - theta) / theta);
}

double t_star_comp(int64_t n, int64_t k) {
  if (n < 2 || k < 1 || k > n) throw std::invalid_argument("t_star_comp: need 1 <= k <= n, n >= 2");
  return static_cast<double>(k) * std::log2(static_cast<double>(n)) / kLn2;
}

double t_star_converse(int64_t n, int64_t k) {
  if (n < 2 || k < 1 || k > n) throw std::invalid_argument("t_star_converse: need 1 <= k <= n, n >= 2");
  const double kd = static_cast<double>(k);
  return std::max(kd * std::log2(static_cast<double>(n) / kd),
                  kd * std::log2(kd) / kLn2);
}

double coupon_expected_distinct(int64_t num_bins, int64_t num_draws) {
  if (num_bins < 1 || num_draws < 0) throw std::invalid_argument("coupon_expected_distinct: bad arguments");
  const double t = static_cast<double>(num_bins);
  return (1.0 - std::pow(1.0 - 1.0 / t, static_cast<double>(num_draws))) * t;
}

double coupon_concentration_bound(double num_bins, double alpha, double eps) {
  if (!(num_bins > 0.0) || !(alpha > 0.0) || !(eps > 0.0)) {
    throw std::invalid_argument("coupon_concentration_bound: arguments must be positive");
  }
  return std::min(1.0, 2.0 * std::exp(-eps * eps * num_bins / alpha));
}

double comp_success_given_m(int64_t m, int64_t t, int64_t l, int64_t num_others) {
  if (t < 1 || m < 0 || m > t || l < 1 || num_others < 0) {
    throw std::invalid_argument("comp_success_given_m: bad arguments");
  }
  const double miss = std::pow(static_cast<double>(m) / static_cast<double>(t), static_cast<double>(l));
  return std::pow(1.0 - miss, static_cast<double>(num_others));
}

std::string theory_curves_csv(double theta_min, double theta_max, double step) {
  if (!(theta_min > 0.0 && theta_min < 1.0) || !(theta_max > 0.0 && theta_max < 1.0) ||
      theta_min >= theta_max || !(step > 0.0)) {
    throw std::invalid_argument("theory_curves_csv: need 0 < theta_min < theta_max < 1 and step > 0");
  }
  std::string out = "theta,bernoulli_capacity,comp_bernoulli,comp_ccw,ccw_converse,counting\n";
  char line[192];
  for (int i = 0;; ++i) {
    // Tiny slack so theta_max itself survives accumulated rounding.
    const double theta = theta_min + step * i;
    if (theta > theta_max + step * 1e-9) break;
    const double th = std::min(theta, theta_max);
    std::snprintf(line, sizeof line, "%.6f,%.9f,%.9f,%.9f,%.9f,%.9f\n", th, bernoulli_capacity(th),
                  comp_bernoulli_rate(th), comp_ccw_rate(th), ccw_converse(th), 1.0);
    out += line;
  }
  return out;
}

}  // namespace gt
