#include "saliency/config.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "saliency/error.hpp"

namespace saliency {
namespace {

using nlohmann::json;

constexpr const char* kKeys[] = {
    "target_k",     "compactness", "iterations",        "threshold_step",           "opening_radius",
    "working_max_side", "sigma_sq", "alpha",             "affinity_exponent",        "background_seed_polarity",
    "sigma_c_source",
};

int get_int(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("config key '") + key + "' must be an integer");
  return v.get<int>();
}

double get_number(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("config key '") + key + "' must be a number");
  return v.get<double>();
}

std::string get_string(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(std::string("config key '") + key + "' must be a string");
  return v.get<std::string>();
}

[[noreturn]] void bad_enum(const char* key, const std::string& value, const char* allowed) {
  throw ConfigError(std::string("config key '") + key + "' has invalid value '" + value + "' (expected " + allowed +
                    ")");
}

const char* to_string(AffinityExponent e) { return e == AffinityExponent::kNorm ? "norm" : "norm_sq"; }
const char* to_string(SeedPolarity p) { return p == SeedPolarity::kAsWritten ? "as_written" : "inverted"; }
const char* to_string(SigmaCSource s) {
  return s == SigmaCSource::kEdgeDistances ? "edge_dc" : "geodesic_all_pairs";
}

}  // namespace

PipelineConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    const bool known = std::any_of(std::begin(kKeys), std::end(kKeys), [&](const char* k) { return key == k; });
    if (!known) throw ConfigError("unknown config key '" + key + "'");
  }

  PipelineConfig cfg;
  if (j.contains("target_k")) cfg.slic.target_k = get_int(j, "target_k");
  if (j.contains("compactness")) cfg.slic.compactness = get_number(j, "compactness");
  if (j.contains("iterations")) cfg.slic.iterations = get_int(j, "iterations");
  if (j.contains("threshold_step")) cfg.surroundedness.threshold_step = get_number(j, "threshold_step");
  if (j.contains("opening_radius")) cfg.surroundedness.opening_radius = get_number(j, "opening_radius");
  if (j.contains("working_max_side")) cfg.surroundedness.working_max_side = get_int(j, "working_max_side");
  if (j.contains("sigma_sq")) cfg.graph.sigma_sq = get_number(j, "sigma_sq");
  if (j.contains("alpha")) cfg.graph.alpha = get_number(j, "alpha");
  if (j.contains("affinity_exponent")) {
    const std::string v = get_string(j, "affinity_exponent");
    if (v == "norm") {
      cfg.graph.exponent = AffinityExponent::kNorm;
    } else if (v == "norm_sq") {
      cfg.graph.exponent = AffinityExponent::kNormSquared;
    } else {
      bad_enum("affinity_exponent", v, "norm | norm_sq");
    }
  }
  if (j.contains("background_seed_polarity")) {
    const std::string v = get_string(j, "background_seed_polarity");
    if (v == "as_written") {
      cfg.background_seed_polarity = SeedPolarity::kAsWritten;
    } else if (v == "inverted") {
      cfg.background_seed_polarity = SeedPolarity::kInverted;
    } else {
      bad_enum("background_seed_polarity", v, "as_written | inverted");
    }
  }
  if (j.contains("sigma_c_source")) {
    const std::string v = get_string(j, "sigma_c_source");
    if (v == "edge_dc") {
      cfg.sigma_c_source = SigmaCSource::kEdgeDistances;
    } else if (v == "geodesic_all_pairs") {
      cfg.sigma_c_source = SigmaCSource::kGeodesicAllPairs;
    } else {
      bad_enum("sigma_c_source", v, "edge_dc | geodesic_all_pairs");
    }
  }

  try {
    validate(cfg);
  } catch (const ContractError& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string config_to_json(const PipelineConfig& cfg) {
  // ordered_json keeps the documented key order in the echo.
  nlohmann::ordered_json j;
  j["target_k"] = cfg.slic.target_k;
  j["compactness"] = cfg.slic.compactness;
  j["iterations"] = cfg.slic.iterations;
  j["threshold_step"] = cfg.surroundedness.threshold_step;
  j["opening_radius"] = cfg.surroundedness.opening_radius;
  j["working_max_side"] = cfg.surroundedness.working_max_side;
  j["sigma_sq"] = cfg.graph.sigma_sq;
  j["alpha"] = cfg.graph.alpha;
  j["affinity_exponent"] = to_string(cfg.graph.exponent);
  j["background_seed_polarity"] = to_string(cfg.background_seed_polarity);
  j["sigma_c_source"] = to_string(cfg.sigma_c_source);
  return j.dump(2) + "\n";
}

}  // namespace saliency
