#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "saliency/image.hpp"

namespace saliency {

inline constexpr double kBetaSquared = 0.3;
inline constexpr int kThresholdCount = 256;

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

/// Foreground iff v > min(2 * mean(v), 1).
BinaryMask binarize_adaptive(const GrayMap& map);

/// Precision/recall with empty denominators mapped to 0 and the weighted
/// F-measure (beta^2 = 0.3). Throws ContractError on a size mismatch.
PrecisionRecall pr_f_measure(const BinaryMask& pred, const BinaryMask& gt);

double mae(const GrayMap& map, const BinaryMask& gt);

/// ROC area from a 256-level sweep over the 8-bit quantized map with
/// trapezoidal integration. Throws UndefinedAucError if gt has one class.
double auc(const GrayMap& map, const BinaryMask& gt);

/// Precision and recall of (quantized map >= t) for t = 0..255.
struct PrCurve {
  std::array<double, kThresholdCount> precision{};
  std::array<double, kThresholdCount> recall{};
};
PrCurve pr_curve(const GrayMap& map, const BinaryMask& gt);

struct ImageMetrics {
  std::string name;
  double mae = 0.0;
  std::optional<double> auc;  // empty when gt has a single class
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

ImageMetrics evaluate_image(const std::string& name, const GrayMap& map, const BinaryMask& gt,
                            PrCurve* curve = nullptr);

struct EvalReport {
  std::vector<ImageMetrics> per_image;  // sorted by name
  ImageMetrics aggregate;               // name "mean"; auc averaged over defined values
  std::size_t auc_count = 0;
  PrCurve pr;  // per-threshold mean over images
  std::vector<std::string> warnings;
};

/// Pairs `<stem>.*` maps in pred_dir with `<stem>.*` masks in gt_dir.
/// Throws ContractError when no pair matches.
EvalReport run_benchmark(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir);

/// Aggregates already computed per-image results.
EvalReport aggregate_report(std::vector<ImageMetrics> per_image, const std::vector<PrCurve>& curves);

/// Writes per_image.csv, pr_curve.csv and summary.csv into out_dir.
void write_report_csv(const EvalReport& report, const std::filesystem::path& out_dir);

}  // namespace saliency
