#pragma once
// Monte Carlo success-rate sweeps.
//
// A cell is one (T, design spec, decoder) combination. Every trial inside a
// cell draws a fresh design and a fresh defective set from the stream
// derive_seed(seed, {T, spec id, decoder id, trial}); trial outcomes are
// integers aggregated commutatively, so a sweep produces identical results
// for any thread count or scheduling order.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gt/decoders.hpp"
#include "gt/design.hpp"

namespace gt {

struct TrialStats {
  int64_t trials = 0;
  int64_t successes = 0;        // estimate exactly equal to the defective set
  int64_t failures = 0;         // everything else, declared errors included
  int64_t declared_errors = 0;  // SSS non-uniqueness or budget exhaustion
  double success_rate = 0.0;
  double ci_low = 0.0;  // Wilson score interval at 95%
  double ci_high = 0.0;
};

struct SimConfig {
  int32_t num_items = 0;
  int32_t num_defectives = 0;
  std::vector<int32_t> test_counts;
  std::vector<DesignSpec> designs;
  std::vector<DecoderKind> decoders;
  int64_t trials = 1000;
  uint64_t seed = 1;
  uint64_t sss_budget = kDefaultSssBudget;
};

// Throws std::invalid_argument with the reason on the first violated field.
void validate_config(const SimConfig& config);

// Wilson score interval for a binomial proportion, clamped to [0, 1].
std::pair<double, double> wilson_interval(int64_t successes, int64_t trials, double confidence);

TrialStats run_cell(int32_t num_items, int32_t num_defectives, int32_t num_tests,
                    const DesignSpec& spec, DecoderKind decoder, int64_t trials, uint64_t seed,
                    uint64_t sss_budget, int threads);

struct SweepRow {
  int32_t num_tests = 0;
  size_t design_index = 0;  // into config.designs
  DecoderKind decoder = DecoderKind::comp;
  TrialStats stats;
};

// Full Cartesian product of the config, rows ordered by (T, design index,
// decoder index) with duplicate T values collapsed. A failing cell aborts
// the sweep with the cell named in the exception.
std::vector<SweepRow> run_sweep(const SimConfig& config, int threads = 1);

// CSV with header design,design_params,decoder,N,K,T,trials,successes,
// declared_errors,success_rate,ci_low,ci_high,seed.
std::string sweep_csv(const SimConfig& config, const std::vector<SweepRow>& rows);

// Human-readable parameter label for one row, e.g. "p=0.069314718" or
// "nu=0.693147181;L=7;replacement=with".
std::string design_params_label(const DesignSpec& spec, int32_t num_tests, int32_t num_defectives);

// threads <= 0 resolves to the hardware concurrency (at least 1).
int resolve_threads(int threads);

}  // namespace gt
