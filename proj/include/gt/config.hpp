#pragma once
// JSON config files for simulation sweeps, and the built-in preset grids.
//
// Parsing is strict: any key the schema does not define is an error, at any
// nesting level. The one deliberate exception is a top-level "_meta" object,
// which the sidecar writer uses for provenance; it is accepted and ignored
// so that a sidecar can be fed back in as a config and reproduce the exact
// run that wrote it.

#include <string>

#include "json.hpp"

#include "gt/sim.hpp"

namespace gt {

inline constexpr const char* kToolVersion = "1.0.0";

// Presets drop SSS above this N*K product; branch and bound on instances of
// that size routinely exhausts any workable node budget.
inline constexpr int64_t kSssPresetLimit = 50'000;

SimConfig parse_sim_config(const nlohmann::json& j);
SimConfig load_sim_config(const std::string& path);

// Every field materialised, defaults included.
nlohmann::json resolved_config_json(const SimConfig& config);

// Resolved config plus a "_meta" provenance object; valid as a config file.
nlohmann::json sidecar_json(const SimConfig& config);

// Benchmark regimes behind the repro-fig2 subcommand. The small regime
// (N=500, K=10) sweeps COMP, DD and SSS; the large regime (N=2000, K=100)
// swaps SSS for SCOMP per kSssPresetLimit.
SimConfig fig2_small_preset();
SimConfig fig2_large_preset();

}  // namespace gt
