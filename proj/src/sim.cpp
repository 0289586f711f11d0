#include "gt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "gt/model.hpp"
#include "gt/rng.hpp"

namespace gt {

namespace {

// Inverse standard normal CDF by bisection on erfc; exact to ~1e-12, and
// only evaluated once per interval so speed is irrelevant.
double normal_quantile(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
    (cdf < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TrialStats finalize(int64_t trials, int64_t successes, int64_t declared) {
  TrialStats s;
  s.trials = trials;
  s.successes = successes;
  s.failures = trials - successes;
  s.declared_errors = declared;
  s.success_rate = trials > 0 ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
  const auto [lo, hi] = wilson_interval(successes, trials, 0.95);
  s.ci_low = lo;
  s.ci_high = hi;
  return s;
}

}  // namespace

void validate_config(const SimConfig& config) {
  if (config.num_items < 2) throw std::invalid_argument("config: N must be at least 2");
  if (config.num_defectives < 1 || config.num_defectives >= config.num_items) {
    throw std::invalid_argument("config: need 1 <= K < N");
  }
  if (config.test_counts.empty()) throw std::invalid_argument("config: T_values must not be empty");
  for (int32_t t : config.test_counts) {
    if (t < 1) throw std::invalid_argument("config: every T must be at least 1");
  }
  if (config.designs.empty()) throw std::invalid_argument("config: designs must not be empty");
  for (const DesignSpec& spec : config.designs) {
    if (const auto* b = std::get_if<Bernoulli>(&spec)) {
      if (!(b->p > 0.0 && b->p < 1.0)) throw std::invalid_argument("config: bernoulli p must lie in (0,1)");
    } else if (!(std::get<ConstantColumnWeight>(spec).nu > 0.0)) {
      throw std::invalid_argument("config: ccw nu must be positive");
    }
  }
  if (config.decoders.empty()) throw std::invalid_argument("config: decoders must not be empty");
  if (config.trials < 1) throw std::invalid_argument("config: trials must be at least 1");
  if (config.sss_budget < 1) throw std::invalid_argument("config: sss_budget must be at least 1");
}

std::pair<double, double> wilson_interval(int64_t successes, int64_t trials, double confidence) {
  if (trials < 1 || successes < 0 || successes > trials) {
    throw std::invalid_argument("wilson_interval: bad counts");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("wilson_interval: confidence must lie in (0,1)");
  }
  const double z = normal_quantile(0.5 + confidence / 2.0);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = p + z2 / (2.0 * n);
  const double radius = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, (centre - radius) / denom), std::min(1.0, (centre + radius) / denom)};
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

TrialStats run_cell(int32_t num_items, int32_t num_defectives, int32_t num_tests,
                    const DesignSpec& spec, DecoderKind decoder, int64_t trials, uint64_t seed,
                    uint64_t sss_budget, int threads) {
  if (num_tests < 1) throw std::invalid_argument("run_cell: need at least one test");
  if (trials < 1) throw std::invalid_argument("run_cell: need at least one trial");
  if (std::holds_alternative<ConstantColumnWeight>(spec)) {
    const int32_t weight = column_weight(spec, num_tests, num_defectives);
    const auto& ccw = std::get<ConstantColumnWeight>(spec);
    if (ccw.replacement == Replacement::without_replacement && weight > num_tests) {
      throw std::invalid_argument("run_cell: column weight exceeds T without replacement");
    }
  }

  const uint64_t spec_id = design_spec_id(spec);
  const uint64_t decoder_id = static_cast<uint64_t>(decoder);

  auto run_trial = [&](int64_t j) -> std::pair<bool, bool> {  // (success, declared error)
    const uint64_t sub = derive_seed(
        seed, {static_cast<uint64_t>(num_tests), spec_id, decoder_id, static_cast<uint64_t>(j)});
    const DesignMatrix design =
        generate_design(spec, num_items, num_tests, num_defectives, derive_seed(sub, {0}));
    const ProblemInstance inst =
        sample_defective_set(num_items, num_defectives, derive_seed(sub, {1}));
    const OutcomeVector y = compute_outcomes(design, inst.defective_set);
    const DecodeResult result = decode_with(decoder, design, y, sss_budget);
    const bool success = result.is_estimate() && result.items == inst.defective_set;
    return {success, !result.is_estimate()};
  };

  const int workers = static_cast<int>(std::min<int64_t>(resolve_threads(threads), trials));
  int64_t successes = 0;
  int64_t declared = 0;
  if (workers <= 1) {
    for (int64_t j = 0; j < trials; ++j) {
      const auto [ok, err] = run_trial(j);
      successes += ok;
      declared += err;
    }
  } else {
    std::vector<int64_t> success_by(static_cast<size_t>(workers), 0);
    std::vector<int64_t> declared_by(static_cast<size_t>(workers), 0);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        int64_t ok_count = 0, err_count = 0;
        for (int64_t j = w; j < trials; j += workers) {
          const auto [ok, err] = run_trial(j);
          ok_count += ok;
          err_count += err;
        }
        success_by[static_cast<size_t>(w)] = ok_count;
        declared_by[static_cast<size_t>(w)] = err_count;
      });
    }
    for (std::thread& t : pool) t.join();
    for (int w = 0; w < workers; ++w) {
      successes += success_by[static_cast<size_t>(w)];
      declared += declared_by[static_cast<size_t>(w)];
    }
  }
  return finalize(trials, successes, declared);
}

std::vector<SweepRow> run_sweep(const SimConfig& config, int threads) {
  validate_config(config);
  std::vector<int32_t> test_counts = config.test_counts;
  std::sort(test_counts.begin(), test_counts.end());
  test_counts.erase(std::unique(test_counts.begin(), test_counts.end()), test_counts.end());

  std::vector<SweepRow> rows;
  rows.reserve(test_counts.size() * config.designs.size() * config.decoders.size());
  for (int32_t t : test_counts) {
    for (size_t d = 0; d < config.designs.size(); ++d) {
      for (DecoderKind decoder : config.decoders) {
        SweepRow row;
        row.num_tests = t;
        row.design_index = d;
        row.decoder = decoder;
        try {
          row.stats = run_cell(config.num_items, config.num_defectives, t, config.designs[d],
                               decoder, config.trials, config.seed, config.sss_budget, threads);
        } catch (const std::exception& e) {
          throw std::runtime_error("cell T=" + std::to_string(t) + " design=" +
                                   design_family(config.designs[d]) + " decoder=" +
                                   std::string(decoder_name(decoder)) + ": " + e.what());
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string design_params_label(const DesignSpec& spec, int32_t num_tests, int32_t num_defectives) {
  char buf[96];
  if (const auto* b = std::get_if<Bernoulli>(&spec)) {
    std::snprintf(buf, sizeof buf, "p=%.9g", b->p);
    return buf;
  }
  const auto& ccw = std::get<ConstantColumnWeight>(spec);
  std::snprintf(buf, sizeof buf, "nu=%.9g;L=%d;replacement=%s", ccw.nu,
                column_weight(spec, num_tests, num_defectives),
                ccw.replacement == Replacement::with_replacement ? "with" : "without");
  return buf;
}

std::string sweep_csv(const SimConfig& config, const std::vector<SweepRow>& rows) {
  std::string out =
      "design,design_params,decoder,N,K,T,trials,successes,declared_errors,"
      "success_rate,ci_low,ci_high,seed\n";
  char buf[256];
  for (const SweepRow& row : rows) {
    const DesignSpec& spec = config.designs[row.design_index];
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%d,%d,%d,%lld,%lld,%lld,%.6f,%.6f,%.6f,%llu\n",
                  design_family(spec).c_str(),
                  design_params_label(spec, row.num_tests, config.num_defectives).c_str(),
                  std::string(decoder_name(row.decoder)).c_str(), config.num_items,
                  config.num_defectives, row.num_tests,
                  static_cast<long long>(row.stats.trials),
                  static_cast<long long>(row.stats.successes),
                  static_cast<long long>(row.stats.declared_errors), row.stats.success_rate,
                  row.stats.ci_low, row.stats.ci_high,
                  static_cast<unsigned long long>(config.seed));
    out += buf;
  }
  return out;
}

}  // namespace gt
