#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gt/config.hpp"
#include "gt/model.hpp"
#include "gt/rng.hpp"
#include "gt/sim.hpp"
#include "gt/theory.hpp"

namespace {

constexpr double kLn2 = std::numbers::ln2;

gt::SimConfig tiny_config() {
  gt::SimConfig c;
  c.num_items = 40;
  c.num_defectives = 3;
  c.test_counts = {15, 25};
  c.designs = {gt::Bernoulli{0.15},
               gt::ConstantColumnWeight{kLn2, gt::Replacement::with_replacement}};
  c.decoders = {gt::DecoderKind::comp};
  c.trials = 200;
  c.seed = 5;
  return c;
}

}  // namespace

TEST_CASE("wilson interval reference values") {
  const auto [lo, hi] = gt::wilson_interval(500, 1000, 0.95);
  CHECK(lo == doctest::Approx(0.4690696003681042).epsilon(1e-9));
  CHECK(hi == doctest::Approx(0.5309303996318958).epsilon(1e-9));
}

TEST_CASE("wilson interval endpoints and monotonicity") {
  const auto [lo0, hi0] = gt::wilson_interval(0, 50, 0.95);
  CHECK(lo0 == 0.0);
  CHECK(hi0 > 0.0);
  CHECK(hi0 < 0.15);
  const auto [lo1, hi1] = gt::wilson_interval(50, 50, 0.95);
  CHECK(hi1 == 1.0);
  CHECK(lo1 < 1.0);
  CHECK(lo1 > 0.85);
  double prev_lo = -1.0;
  double prev_hi = -1.0;
  for (int64_t s = 0; s <= 20; ++s) {
    const auto [lo, hi] = gt::wilson_interval(s, 20, 0.95);
    CHECK(lo >= prev_lo);
    CHECK(hi >= prev_hi);
    CHECK(lo <= static_cast<double>(s) / 20.0);
    CHECK(hi >= static_cast<double>(s) / 20.0);
    prev_lo = lo;
    prev_hi = hi;
  }
  CHECK_THROWS_AS(gt::wilson_interval(5, 0, 0.95), std::invalid_argument);
  CHECK_THROWS_AS(gt::wilson_interval(5, 4, 0.95), std::invalid_argument);
  CHECK_THROWS_AS(gt::wilson_interval(1, 4, 1.0), std::invalid_argument);
}

TEST_CASE("wider confidence widens the interval") {
  const auto [lo95, hi95] = gt::wilson_interval(30, 100, 0.95);
  const auto [lo99, hi99] = gt::wilson_interval(30, 100, 0.99);
  CHECK(lo99 < lo95);
  CHECK(hi99 > hi95);
}

TEST_CASE("run_cell is deterministic and thread count invariant") {
  const gt::DesignSpec spec = gt::ConstantColumnWeight{kLn2, gt::Replacement::with_replacement};
  const auto a = gt::run_cell(60, 4, 30, spec, gt::DecoderKind::dd, 300, 11,
                              gt::kDefaultSssBudget, 1);
  const auto b = gt::run_cell(60, 4, 30, spec, gt::DecoderKind::dd, 300, 11,
                              gt::kDefaultSssBudget, 3);
  CHECK(a.successes == b.successes);
  CHECK(a.declared_errors == b.declared_errors);
  CHECK(a.trials == 300);
  CHECK(a.successes + a.failures == a.trials);
  CHECK(a.success_rate == doctest::Approx(static_cast<double>(a.successes) / 300.0));
  const auto c = gt::run_cell(60, 4, 30, spec, gt::DecoderKind::dd, 300, 12,
                              gt::kDefaultSssBudget, 1);
  CHECK(a.successes != c.successes);  // seed actually feeds the trials
}

TEST_CASE("one defective is easy for sss at modest T") {
  const gt::DesignSpec spec = gt::ConstantColumnWeight{kLn2, gt::Replacement::with_replacement};
  const auto s = gt::run_cell(100, 1, 67, spec, gt::DecoderKind::sss, 200, 3,
                              gt::kDefaultSssBudget, 2);
  CHECK(s.success_rate >= 0.99);
  CHECK(s.declared_errors <= 2);
}

TEST_CASE("a strangled budget surfaces as declared errors") {
  const gt::DesignSpec spec = gt::ConstantColumnWeight{kLn2, gt::Replacement::with_replacement};
  const auto s = gt::run_cell(50, 3, 20, spec, gt::DecoderKind::sss, 100, 3, 2, 1);
  CHECK(s.declared_errors > 0);
  CHECK(s.declared_errors <= s.failures);
}

TEST_CASE("decoder ordering holds on aggregate success") {
  // DD succeeds only by finding exactly the defective set, COMP by exclusion;
  // SCOMP refines DD, SSS refines further. On a mid-difficulty cell the rates
  // should be ordered COMP <= ... well below the ceiling, DD <= SCOMP <= SSS.
  const gt::DesignSpec spec = gt::ConstantColumnWeight{kLn2, gt::Replacement::with_replacement};
  const auto dd = gt::run_cell(80, 4, 35, spec, gt::DecoderKind::dd, 400, 21,
                               gt::kDefaultSssBudget, 2);
  const auto scomp = gt::run_cell(80, 4, 35, spec, gt::DecoderKind::scomp, 400, 21,
                                  gt::kDefaultSssBudget, 2);
  const auto sss = gt::run_cell(80, 4, 35, spec, gt::DecoderKind::sss, 400, 21,
                                gt::kDefaultSssBudget, 2);
  // Same trial streams per decoder id differ, so compare with slack: 400
  // trials give a standard error around 0.025.
  CHECK(dd.success_rate <= scomp.success_rate + 0.08);
  CHECK(scomp.success_rate <= sss.success_rate + 0.08);
}

TEST_CASE("empirical comp success matches the conditional mixture") {
  // Rebuild the exact per-trial streams run_cell uses and average the exact
  // conditional success probability given the positive test count.
  const int32_t n = 200, k = 5, t = 60;
  const int64_t trials = 800;
  const uint64_t seed = 9;
  const gt::DesignSpec spec = gt::ConstantColumnWeight{kLn2, gt::Replacement::with_replacement};
  const int32_t weight = gt::column_weight(spec, t, k);
  const auto cell = gt::run_cell(n, k, t, spec, gt::DecoderKind::comp, trials, seed,
                                 gt::kDefaultSssBudget, 2);
  const uint64_t spec_id = gt::design_spec_id(spec);
  const uint64_t decoder_id = static_cast<uint64_t>(gt::DecoderKind::comp);
  double mixture = 0.0;
  for (int64_t j = 0; j < trials; ++j) {
    const uint64_t sub = gt::derive_seed(
        seed, {static_cast<uint64_t>(t), spec_id, decoder_id, static_cast<uint64_t>(j)});
    const auto design = gt::generate_design(spec, n, t, k, gt::derive_seed(sub, {0}));
    const auto inst = gt::sample_defective_set(n, k, gt::derive_seed(sub, {1}));
    const auto y = gt::compute_outcomes(design, inst.defective_set);
    mixture += gt::comp_success_given_m(y.positive_count, t, weight, n - k);
  }
  mixture /= static_cast<double>(trials);
  // Per-trial residuals are mean zero with sd <= 0.5; five sigma is 0.09.
  CHECK(std::abs(cell.success_rate - mixture) < 0.09);
  CHECK(mixture > 0.05);
  CHECK(mixture < 0.95);
}

TEST_CASE("run_sweep orders rows and collapses duplicate T") {
  auto config = tiny_config();
  config.test_counts = {25, 15, 25};
  const auto rows = gt::run_sweep(config, 2);
  REQUIRE(rows.size() == 4);  // 2 T x 2 designs x 1 decoder
  CHECK(rows[0].num_tests == 15);
  CHECK(rows[0].design_index == 0);
  CHECK(rows[1].num_tests == 15);
  CHECK(rows[1].design_index == 1);
  CHECK(rows[2].num_tests == 25);
  CHECK(rows[3].num_tests == 25);
  for (const auto& row : rows) CHECK(row.stats.trials == 200);
}

TEST_CASE("run_sweep validates its config") {
  auto config = tiny_config();
  config.decoders.clear();
  CHECK_THROWS_AS(gt::run_sweep(config, 1), std::invalid_argument);
  config = tiny_config();
  config.num_defectives = 40;
  CHECK_THROWS_AS(gt::run_sweep(config, 1), std::invalid_argument);
  config = tiny_config();
  config.designs = {gt::Bernoulli{1.5}};
  CHECK_THROWS_AS(gt::run_sweep(config, 1), std::invalid_argument);
}

TEST_CASE("sweep csv is deterministic across thread counts and runs") {
  const auto config = tiny_config();
  const auto csv1 = gt::sweep_csv(config, gt::run_sweep(config, 1));
  const auto csv3 = gt::sweep_csv(config, gt::run_sweep(config, 3));
  CHECK(csv1 == csv3);
  CHECK(csv1 == gt::sweep_csv(config, gt::run_sweep(config, 2)));
}

TEST_CASE("sweep csv schema") {
  const auto config = tiny_config();
  const auto csv = gt::sweep_csv(config, gt::run_sweep(config, 2));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line ==
        "design,design_params,decoder,N,K,T,trials,successes,declared_errors,"
        "success_rate,ci_low,ci_high,seed");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    int commas = 0;
    for (char ch : line) commas += ch == ',';
    CHECK(commas == 12);
    // Seed is the last field on every row.
    CHECK(line.substr(line.rfind(',') + 1) == "5");
  }
  CHECK(rows == 4);
  CHECK(csv.find("bernoulli,p=0.15,COMP,40,3,15,200,") != std::string::npos);
  CHECK(csv.find("ccw,nu=0.693147181;L=") != std::string::npos);
}

TEST_CASE("design params label") {
  CHECK(gt::design_params_label(gt::Bernoulli{0.0693147}, 100, 10) == "p=0.0693147");
  const gt::DesignSpec ccw = gt::ConstantColumnWeight{kLn2, gt::Replacement::with_replacement};
  CHECK(gt::design_params_label(ccw, 100, 10) == "nu=0.693147181;L=7;replacement=with");
  const gt::DesignSpec wo = gt::ConstantColumnWeight{1.0, gt::Replacement::without_replacement};
  CHECK(gt::design_params_label(wo, 50, 5) == "nu=1;L=10;replacement=without");
}

TEST_CASE("success rates respect the counting bound") {
  gt::SimConfig config;
  config.num_items = 30;
  config.num_defectives = 2;
  config.test_counts = {3, 5, 7, 9};
  config.designs = {gt::ConstantColumnWeight{kLn2, gt::Replacement::with_replacement}};
  config.decoders = {gt::DecoderKind::comp, gt::DecoderKind::sss};
  config.trials = 400;
  config.seed = 31;
  const auto rows = gt::run_sweep(config, 2);
  for (const auto& row : rows) {
    const double bound = gt::counting_bound(30, 2, row.num_tests);
    const double sigma = std::sqrt(bound * (1.0 - bound) / static_cast<double>(config.trials));
    CHECK(row.stats.success_rate <= bound + 3.0 * sigma + 1e-12);
  }
}

TEST_CASE("success grows with T") {
  gt::SimConfig config;
  config.num_items = 100;
  config.num_defectives = 3;
  config.test_counts = {20, 40, 60, 80};
  config.designs = {gt::ConstantColumnWeight{kLn2, gt::Replacement::with_replacement}};
  config.decoders = {gt::DecoderKind::comp};
  config.trials = 400;
  config.seed = 7;
  const auto rows = gt::run_sweep(config, 2);
  for (size_t i = 1; i < rows.size(); ++i) {
    // Monotone up to CI width: the next point may not sit below the previous
    // interval.
    CHECK(rows[i].stats.ci_high >= rows[i - 1].stats.ci_low);
  }
  CHECK(rows.back().stats.success_rate > rows.front().stats.success_rate);
}

TEST_CASE("resolve_threads") {
  CHECK(gt::resolve_threads(4) == 4);
  CHECK(gt::resolve_threads(1) == 1);
  CHECK(gt::resolve_threads(0) >= 1);
  CHECK(gt::resolve_threads(-2) >= 1);
}
