#pragma once

#include <filesystem>
#include <optional>
#include <ostream>

namespace saliency::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitConfig = 2;

struct DetectOptions {
  std::filesystem::path image;
  std::filesystem::path out;
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> dump_dir;
};

struct BatchOptions {
  std::filesystem::path image_dir;
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> config;
  int jobs = 1;
};

struct EvalOptions {
  std::filesystem::path pred_dir;
  std::filesystem::path gt_dir;
  std::filesystem::path out_dir;
};

/// Config path precedence: explicit flag, then $SALIENCY_CONFIG, then defaults.
std::optional<std::filesystem::path> resolve_config_path(const std::optional<std::filesystem::path>& flag);

int cmd_detect(const DetectOptions& opts, std::ostream& out, std::ostream& err);
int cmd_batch(const BatchOptions& opts, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv (subcommands detect / batch / eval) and dispatches.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace saliency::cli
