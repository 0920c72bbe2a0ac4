#pragma once

#include <filesystem>
#include <string>

#include "saliency/pipeline.hpp"

namespace saliency {

/// Parses a JSON object with one key per PipelineConfig field. Missing keys
/// keep their defaults; unknown keys, wrong types and out-of-range values
/// throw ConfigError with the offending key in the message.
PipelineConfig parse_config(const std::string& json_text);
PipelineConfig load_config(const std::filesystem::path& path);

/// Fully resolved config as pretty-printed JSON (stable key order).
std::string config_to_json(const PipelineConfig& cfg);

}  // namespace saliency
