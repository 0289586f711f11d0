#pragma once
// Closed-form rates, capacities and thresholds for nonadaptive group testing
// with N items and K = N^(1-theta) defectives, plus the coupon-collector
// quantities behind the constant column weight analysis. Rates are in bits
// per test throughout, so entropies use log base 2.

#include <cstdint>
#include <string>

namespace gt {

// h(p) = -p log2 p - (1-p) log2 (1-p), with h(0) = h(1) = 0.
double binary_entropy(double p);

// log2 of C(n, k). Exact big-integer arithmetic for n <= 1000, log-gamma
// beyond; the two agree to 1e-9 relative where both apply.
double log2_binomial(int64_t n, int64_t k);

// Bits learned per test when T tests recover one of C(n, k) sets.
double rate(int64_t n, int64_t k, double num_tests);

// Universal success ceiling min(1, 2^T / C(n, k)) for any design and decoder.
double counting_bound(int64_t n, int64_t k, double num_tests);

// Capacity of Bernoulli designs: max over nu > 0 of
// min{ (nu e^-nu / ln 2) (1-theta)/theta, h(e^-nu) }. Equals 1 for
// theta <= 1/3. Numerically maximised to about 1e-9.
double bernoulli_capacity(double theta);

// COMP decoding rates: (1/(e ln 2))(1-theta) for Bernoulli designs and
// ln 2 (1-theta) for constant column weight designs, a ratio of e (ln 2)^2.
double comp_bernoulli_rate(double theta);
double comp_ccw_rate(double theta);

// COMP rate achieved by a constant column weight design with general nu:
// nu log2(1/(1 - e^-nu)) (1-theta). Maximised at nu = ln 2, where it reduces
// to comp_ccw_rate.
double comp_ccw_rate_at(double theta, double nu);

// Rate ceiling for any decoder on constant column weight designs:
// min{1, ln 2 (1-theta)/theta}. Below 1 exactly for theta > ln2/(1+ln2).
double ccw_converse(double theta);

// Tests needed by COMP on a constant column weight design: (K / ln 2) log2 N.
double t_star_comp(int64_t n, int64_t k);

// Converse for any algorithm and design: max{K log2(N/K), (K / ln 2) log2 K}.
double t_star_converse(int64_t n, int64_t k);

// Expected number of distinct values among c uniform draws from T bins:
// E W = (1 - (1 - 1/T)^c) T.
double coupon_expected_distinct(int64_t num_bins, int64_t num_draws);

// Tail bound P(|W - (1 - e^-alpha) T| >= eps T) <= 2 exp(-eps^2 T / alpha)
// for c = alpha T draws, clipped to 1.
double coupon_concentration_bound(double num_bins, double alpha, double eps);

// P(COMP succeeds | m positive tests) for a constant column weight design
// with per-item weight drawn as l tests with replacement and num_others
// non-defective items: (1 - (m/t)^l)^num_others.
double comp_success_given_m(int64_t m, int64_t t, int64_t l, int64_t num_others);

// CSV over a theta grid with header
// theta,bernoulli_capacity,comp_bernoulli,comp_ccw,ccw_converse,counting
// where counting is the trivial 1 bit/test ceiling.
std::string theory_curves_csv(double theta_min, double theta_max, double step);

}  // namespace gt
