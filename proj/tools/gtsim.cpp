// gtsim: group testing design simulation and rate/capacity curves.
//
// Subcommands:
//   simulate       run the sweep described by a JSON config
//   theory-curves  rate and capacity curves over a theta grid
//   coupon-check   verify the distinct-draw formula and its tail bound
//   repro-fig1     preset theory curve grid
//   repro-fig2     preset success-rate sweeps (N=500,K=10 and N=2000,K=100)
//
// Exit codes: 0 success, 1 runtime failure (I/O, internal), 2 usage or
// config validation error.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gt/config.hpp"
#include "gt/decoders.hpp"
#include "gt/rng.hpp"
#include "gt/sim.hpp"
#include "gt/theory.hpp"

namespace {

using namespace gt;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string sweep_plot_stub(const std::string& csv_name, const SimConfig& config) {
  std::string gp =
      "# Success rate against number of tests, one series per design family\n"
      "# and decoder. Usage: gnuplot -p " + csv_name + ".gp\n"
      "set datafile separator ','\n"
      "set key left top\n"
      "set xlabel 'tests T'\n"
      "set ylabel 'success rate'\n"
      "set yrange [0:1.02]\n"
      "plot \\\n";
  bool first = true;
  for (const DesignSpec& spec : config.designs) {
    for (DecoderKind decoder : config.decoders) {
      if (!first) gp += ", \\\n";
      first = false;
      const std::string family = design_family(spec);
      const std::string dec(decoder_name(decoder));
      gp += "  '" + csv_name + "' using (strcol(1) eq '" + family + "' && strcol(3) eq '" + dec +
            "' ? $6 : 1/0):10 with linespoints title '" + family + " " + dec + "'";
    }
  }
  gp += "\n";
  return gp;
}

std::string theory_plot_stub(const std::string& csv_name) {
  return
      "# Rates in bits per test against theta. Usage: gnuplot -p " + csv_name + ".gp\n"
      "set datafile separator ','\n"
      "set key top right\n"
      "set xlabel 'theta'\n"
      "set ylabel 'rate (bits per test)'\n"
      "set yrange [0:1.05]\n"
      "plot '" + csv_name + "' skip 1 using 1:2 with lines title 'bernoulli capacity', \\\n"
      "     '" + csv_name + "' skip 1 using 1:3 with lines title 'COMP bernoulli', \\\n"
      "     '" + csv_name + "' skip 1 using 1:4 with lines title 'COMP ccw', \\\n"
      "     '" + csv_name + "' skip 1 using 1:5 with lines title 'ccw converse', \\\n"
      "     '" + csv_name + "' skip 1 using 1:6 with lines title 'counting'\n";
}

void write_sweep_outputs(const std::string& csv_path, const SimConfig& config, int threads) {
  const std::vector<SweepRow> rows = run_sweep(config, threads);
  write_file(csv_path, sweep_csv(config, rows));
  write_file(csv_path + ".meta.json", sidecar_json(config).dump(2) + "\n");
  const std::string csv_name = std::filesystem::path(csv_path).filename().string();
  write_file(csv_path + ".gp", sweep_plot_stub(csv_name, config));
}

bool uses_sss(const SimConfig& config) {
  for (DecoderKind d : config.decoders) {
    if (d == DecoderKind::sss) return true;
  }
  return false;
}

int cmd_simulate(const SimConfig& config, const std::string& out, int threads) {
  if (uses_sss(config) &&
      static_cast<int64_t>(config.num_items) * config.num_defectives > kSssPresetLimit) {
    std::fprintf(stderr,
                 "warning: SSS with N*K=%lld above %lld; expect budget exhaustion\n",
                 static_cast<long long>(config.num_items) * config.num_defectives,
                 static_cast<long long>(kSssPresetLimit));
  }
  write_sweep_outputs(out, config, threads);
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

int cmd_theory_curves(double theta_min, double theta_max, double step, const std::string& out) {
  write_file(out, theory_curves_csv(theta_min, theta_max, step));
  write_file(out + ".gp", theory_plot_stub(std::filesystem::path(out).filename().string()));
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

// Exact mean of the distinct count over every possible draw sequence.
// Feasible for num_bins, num_draws <= 8 (at most 8^8 sequences).
double coupon_mean_by_enumeration(int num_bins, int num_draws) {
  std::vector<int> digits(static_cast<size_t>(num_draws), 0);
  uint64_t total = 0;
  uint64_t sequences = 0;
  for (;;) {
    uint32_t seen = 0;
    for (int d : digits) seen |= uint32_t{1} << d;
    total += static_cast<uint64_t>(std::popcount(seen));
    ++sequences;
    int pos = num_draws - 1;
    while (pos >= 0 && digits[static_cast<size_t>(pos)] == num_bins - 1) {
      digits[static_cast<size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++digits[static_cast<size_t>(pos)];
  }
  return static_cast<double>(total) / static_cast<double>(sequences);
}

int cmd_coupon_check(int t_max, int c_max, int64_t mc_trials, uint64_t seed) {
  if (t_max < 1 || t_max > 8 || c_max < 0 || c_max > 8) {
    throw std::invalid_argument("coupon-check: t-max must lie in [1,8] and c-max in [0,8]");
  }
  if (mc_trials < 100) throw std::invalid_argument("coupon-check: mc-trials must be at least 100");
  bool all_ok = true;
  for (int t = 1; t <= t_max; ++t) {
    double worst = 0.0;
    for (int c = 0; c <= c_max; ++c) {
      worst = std::max(worst,
                       std::fabs(coupon_mean_by_enumeration(t, c) - coupon_expected_distinct(t, c)));
    }
    const bool ok = worst <= 1e-12;
    all_ok = all_ok && ok;
    std::printf("%s exact enumeration T=%d c=0..%d max|diff|=%.3g\n", ok ? "PASS" : "FAIL", t,
                c_max, worst);
  }

  // Monte Carlo: sample means against the formula, then the tail frequency
  // against the concentration bound at alpha close to ln 2.
  struct Scenario {
    int num_bins;
    double alpha;
  } scenarios[] = {{100, 0.5}, {1000, 0.693}};
  for (const auto& sc : scenarios) {
    const int draws = static_cast<int>(std::llround(sc.alpha * sc.num_bins));
    SplitMix64 rng(derive_seed(seed, {static_cast<uint64_t>(sc.num_bins)}));
    std::vector<uint8_t> seen(static_cast<size_t>(sc.num_bins));
    double sum = 0.0, sum_sq = 0.0;
    int64_t tail_hits = 0;
    const double asymptotic_mean = (1.0 - std::exp(-sc.alpha)) * sc.num_bins;
    const double eps = 0.05;
    for (int64_t trial = 0; trial < mc_trials; ++trial) {
      std::fill(seen.begin(), seen.end(), 0);
      int distinct = 0;
      for (int d = 0; d < draws; ++d) {
        const auto bin = static_cast<size_t>(rng.uniform_below(static_cast<uint64_t>(sc.num_bins)));
        if (!seen[bin]) {
          seen[bin] = 1;
          ++distinct;
        }
      }
      sum += distinct;
      sum_sq += static_cast<double>(distinct) * distinct;
      if (std::fabs(distinct - asymptotic_mean) >= eps * sc.num_bins) ++tail_hits;
    }
    const double n = static_cast<double>(mc_trials);
    const double mean = sum / n;
    const double sd = std::sqrt(std::max(0.0, sum_sq / n - mean * mean));
    const double expected = coupon_expected_distinct(sc.num_bins, draws);
    const double slack = 5.0 * sd / std::sqrt(n) + 1e-9;
    const bool mean_ok = std::fabs(mean - expected) <= slack;
    all_ok = all_ok && mean_ok;
    std::printf("%s monte carlo mean T=%d c=%d mean=%.4f expected=%.4f tolerance=%.4f\n",
                mean_ok ? "PASS" : "FAIL", sc.num_bins, draws, mean, expected, slack);

    const double bound = coupon_concentration_bound(sc.num_bins, sc.alpha, eps);
    const double tail = static_cast<double>(tail_hits) / n;
    // The bound caps the true tail; allow for sampling noise on top.
    const double tail_limit = bound + 4.0 * std::sqrt(bound * (1.0 - bound) / n) + 2.0 / n;
    const bool tail_ok = tail <= tail_limit;
    all_ok = all_ok && tail_ok;
    std::printf("%s concentration tail T=%d eps=%.2f tail=%.4f bound=%.4f limit=%.4f\n",
                tail_ok ? "PASS" : "FAIL", sc.num_bins, eps, tail, bound, tail_limit);
  }
  return all_ok ? 0 : 1;
}

int cmd_repro_fig1(const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::string path = (std::filesystem::path(out_dir) / "fig1_theory_curves.csv").string();
  return cmd_theory_curves(0.01, 0.99, 0.01, path);
}

int cmd_repro_fig2(const std::string& out_dir, int threads, const SimConfig& small_config,
                   const SimConfig& large_config) {
  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);
  write_sweep_outputs((dir / "fig2_n500_k10.csv").string(), small_config, threads);
  std::printf("wrote %s\n", (dir / "fig2_n500_k10.csv").c_str());
  write_sweep_outputs((dir / "fig2_n2000_k100.csv").string(), large_config, threads);
  std::printf("wrote %s\n", (dir / "fig2_n2000_k100.csv").c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"group testing simulation and theory toolkit"};
  app.set_version_flag("--version", std::string("gtsim ") + kToolVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string out_dir = ".";
  uint64_t seed = 0;
  int64_t trials = 0;
  uint64_t sss_budget = 0;
  int threads = 0;
  double theta_min = 0.01, theta_max = 0.99, theta_step = 0.01;
  int t_max = 6, c_max = 6;
  int64_t mc_trials = 2000;
  uint64_t coupon_seed = 1;

  CLI::App* simulate = app.add_subcommand("simulate", "run the sweep described by a JSON config");
  simulate->add_option("--config", config_path, "JSON config file")->required();
  simulate->add_option("--out", out_path, "output CSV path")->default_val("results.csv");
  CLI::Option* sim_seed = simulate->add_option("--seed", seed, "override config seed");
  CLI::Option* sim_trials = simulate->add_option("--trials", trials, "override config trials");
  CLI::Option* sim_budget =
      simulate->add_option("--sss-budget", sss_budget, "override SSS node budget");
  simulate->add_option("--threads", threads, "worker threads (0 = hardware)");

  CLI::App* curves = app.add_subcommand("theory-curves", "rate and capacity curves on a theta grid");
  curves->add_option("--theta-min", theta_min, "grid start")->default_val(0.01);
  curves->add_option("--theta-max", theta_max, "grid end")->default_val(0.99);
  curves->add_option("--step", theta_step, "grid step")->default_val(0.01);
  curves->add_option("--out", out_path, "output CSV path")->default_val("theory_curves.csv");

  CLI::App* coupon = app.add_subcommand("coupon-check", "verify the distinct-draw formula");
  coupon->add_option("--t-max", t_max, "exhaustive check up to this many bins (max 8)")
      ->default_val(6);
  coupon->add_option("--c-max", c_max, "exhaustive check up to this many draws (max 8)")
      ->default_val(6);
  coupon->add_option("--mc-trials", mc_trials, "Monte Carlo trials")->default_val(2000);
  coupon->add_option("--seed", coupon_seed, "Monte Carlo seed")->default_val(1);

  CLI::App* fig1 = app.add_subcommand("repro-fig1", "preset theory curve grid");
  fig1->add_option("--out", out_dir, "output directory")->default_val(".");

  CLI::App* fig2 = app.add_subcommand("repro-fig2", "preset success-rate sweeps");
  fig2->add_option("--out", out_dir, "output directory")->default_val(".");
  CLI::Option* fig2_seed = fig2->add_option("--seed", seed, "override preset seed");
  CLI::Option* fig2_trials = fig2->add_option("--trials", trials, "override preset trials");
  CLI::Option* fig2_budget =
      fig2->add_option("--sss-budget", sss_budget, "override SSS node budget");
  fig2->add_option("--threads", threads, "worker threads (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) {
      SimConfig config = load_sim_config(config_path);
      if (sim_seed->count() > 0) config.seed = seed;
      if (sim_trials->count() > 0) config.trials = trials;
      if (sim_budget->count() > 0) config.sss_budget = sss_budget;
      validate_config(config);
      return cmd_simulate(config, out_path, threads);
    }
    if (curves->parsed()) {
      return cmd_theory_curves(theta_min, theta_max, theta_step, out_path);
    }
    if (coupon->parsed()) {
      return cmd_coupon_check(t_max, c_max, mc_trials, coupon_seed);
    }
    if (fig1->parsed()) {
      return cmd_repro_fig1(out_dir);
    }
    if (fig2->parsed()) {
      SimConfig small_config = fig2_small_preset();
      SimConfig large_config = fig2_large_preset();
      for (SimConfig* c : {&small_config, &large_config}) {
        if (fig2_seed->count() > 0) c->seed = seed;
        if (fig2_trials->count() > 0) c->trials = trials;
        if (fig2_budget->count() > 0) c->sss_budget = sss_budget;
      }
      return cmd_repro_fig2(out_dir, threads, small_config, large_config);
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::logic_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
