#include "gt/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace gt {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const char* where) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument("config: unknown key \"" + key + "\" in " + where);
    }
  }
}

template <typename T>
T require(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) {
    throw std::invalid_argument("config: missing key \"" + std::string(key) + "\" in " +
                                where);
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument("config: key \"" + std::string(key) + "\" in " + where +
                                " has the wrong type");
  }
}

template <typename T>
T optional_or(const json& j, const char* key, const char* where, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument("config: key \"" + std::string(key) + "\" in " + where +
                                " has the wrong type");
  }
}

DesignSpec parse_design(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: each design must be an object");
  const std::string family = require<std::string>(j, "family", "design");
  if (family == "bernoulli") {
    reject_unknown_keys(j, {"family", "p"}, "bernoulli design");
    return Bernoulli{require<double>(j, "p", "bernoulli design")};
  }
  if (family == "ccw") {
    reject_unknown_keys(j, {"family", "nu", "replacement"}, "ccw design");
    const std::string rep = require<std::string>(j, "replacement", "ccw design");
    if (rep != "with" && rep != "without") {
      throw std::invalid_argument("config: replacement must be \"with\" or \"without\"");
    }
    return ConstantColumnWeight{require<double>(j, "nu", "ccw design"),
                                rep == "with" ? Replacement::with_replacement
                                              : Replacement::without_replacement};
  }
  throw std::invalid_argument("config: unknown design family \"" + family + "\"");
}

json design_json(const DesignSpec& spec) {
  if (const auto* b = std::get_if<Bernoulli>(&spec)) {
    return {{"family", "bernoulli"}, {"p", b->p}};
  }
  const auto& ccw = std::get<ConstantColumnWeight>(spec);
  return {{"family", "ccw"},
          {"nu", ccw.nu},
          {"replacement", ccw.replacement == Replacement::with_replacement ? "with" : "without"}};
}

}  // namespace

SimConfig parse_sim_config(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  reject_unknown_keys(
      j, {"N", "K", "T_values", "designs", "decoders", "trials", "seed", "sss_budget", "_meta"},
      "top level");
  SimConfig config;
  config.num_items = require<int32_t>(j, "N", "top level");
  config.num_defectives = require<int32_t>(j, "K", "top level");
  config.test_counts = require<std::vector<int32_t>>(j, "T_values", "top level");
  if (!j.contains("designs")) {
    throw std::invalid_argument("config: missing key \"designs\" in top level");
  }
  const json& designs = j.at("designs");
  if (!designs.is_array() || designs.empty()) {
    throw std::invalid_argument("config: \"designs\" must be a non-empty array");
  }
  for (const json& d : designs) config.designs.push_back(parse_design(d));
  for (const std::string& name :
       require<std::vector<std::string>>(j, "decoders", "top level")) {
    const auto kind = decoder_from_name(name);
    if (!kind) throw std::invalid_argument("config: unknown decoder \"" + name + "\"");
    config.decoders.push_back(*kind);
  }
  config.trials = optional_or<int64_t>(j, "trials", "top level", config.trials);
  config.seed = optional_or<uint64_t>(j, "seed", "top level", config.seed);
  config.sss_budget = optional_or<uint64_t>(j, "sss_budget", "top level", config.sss_budget);
  validate_config(config);
  return config;
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: " + std::string(e.what()));
  }
  return parse_sim_config(j);
}

json resolved_config_json(const SimConfig& config) {
  json designs = json::array();
  for (const DesignSpec& spec : config.designs) designs.push_back(design_json(spec));
  json decoders = json::array();
  for (DecoderKind d : config.decoders) decoders.push_back(std::string(decoder_name(d)));
  return {{"N", config.num_items},      {"K", config.num_defectives},
          {"T_values", config.test_counts}, {"designs", designs},
          {"decoders", decoders},       {"trials", config.trials},
          {"seed", config.seed},        {"sss_budget", config.sss_budget}};
}

json sidecar_json(const SimConfig& config) {
  json j = resolved_config_json(config);
  j["_meta"] = {{"tool", "gtsim"}, {"tool_version", kToolVersion}};
  return j;
}

SimConfig fig2_small_preset() {
  SimConfig config;
  config.num_items = 500;
  config.num_defectives = 10;
  config.test_counts = {60, 70, 80, 90, 100, 110, 120, 130, 140};
  config.designs = {Bernoulli{std::numbers::ln2 / 10.0},
                    ConstantColumnWeight{std::numbers::ln2, Replacement::with_replacement}};
  config.decoders = {DecoderKind::comp, DecoderKind::dd, DecoderKind::sss};
  config.trials = 1000;
  config.seed = 1;
  return config;
}

SimConfig fig2_large_preset() {
  SimConfig config;
  config.num_items = 2000;
  config.num_defectives = 100;
  config.test_counts = {500, 750, 1000, 1250, 1500, 1750, 2000, 2250, 2500};
  config.designs = {Bernoulli{std::numbers::ln2 / 100.0},
                    ConstantColumnWeight{std::numbers::ln2, Replacement::with_replacement}};
  config.decoders = {DecoderKind::comp, DecoderKind::dd, DecoderKind::scomp};
  config.trials = 1000;
  config.seed = 1;
  return config;
}

}  // namespace gt
