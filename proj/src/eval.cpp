#include "saliency/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "saliency/error.hpp"
#include "saliency/imageio.hpp"

namespace saliency {
namespace {

template <typename A, typename B>
void require_same_size(const A& a, const B& b, const char* what) {
  if (a.width != b.width || a.height != b.height || a.data.size() != b.data.size()) {
    throw ContractError(std::string(what) + ": map and ground truth dimensions differ");
  }
}

struct Histograms {
  std::array<std::uint64_t, kThresholdCount> pos{};
  std::array<std::uint64_t, kThresholdCount> neg{};
  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;
};

Histograms quantized_histograms(const GrayMap& map, const BinaryMask& gt) {
  Histograms h;
  for (std::size_t i = 0; i < map.data.size(); ++i) {
    const std::uint8_t q = to_byte(map.data[i]);
    if (gt.data[i]) {
      ++h.pos[q];
      ++h.positives;
    } else {
      ++h.neg[q];
      ++h.negatives;
    }
  }
  return h;
}

std::string fixed6(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

bool is_image_file(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::map<std::string, std::filesystem::path> files_by_stem(const std::filesystem::path& dir,
                                                            std::vector<std::string>& warnings) {
  std::map<std::string, std::filesystem::path> out;
  if (!std::filesystem::is_directory(dir)) return out;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    const std::string stem = f.stem().string();
    if (!out.emplace(stem, f).second) warnings.push_back("duplicate stem ignored: " + f.string());
  }
  return out;
}

}  // namespace

BinaryMask binarize_adaptive(const GrayMap& map) {
  BinaryMask mask(map.width, map.height);
  if (map.data.empty()) return mask;
  const double mean = std::accumulate(map.data.begin(), map.data.end(), 0.0) / map.data.size();
  const double threshold = std::min(2.0 * mean, 1.0);
  for (std::size_t i = 0; i < map.data.size(); ++i) mask.data[i] = map.data[i] > threshold ? 1 : 0;
  return mask;
}

PrecisionRecall pr_f_measure(const BinaryMask& pred, const BinaryMask& gt) {
  require_same_size(pred, gt, "pr_f_measure");
  std::uint64_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    const bool p = pred.data[i] != 0, g = gt.data[i] != 0;
    tp += p && g;
    fp += p && !g;
    fn += !p && g;
  }
  PrecisionRecall r;
  r.precision = tp + fp > 0 ? double(tp) / double(tp + fp) : 0.0;
  r.recall = tp + fn > 0 ? double(tp) / double(tp + fn) : 0.0;
  const double denom = kBetaSquared * r.precision + r.recall;
  r.f_measure = denom > 0.0 ? (1.0 + kBetaSquared) * r.precision * r.recall / denom : 0.0;
  return r;
}

double mae(const GrayMap& map, const BinaryMask& gt) {
  require_same_size(map, gt, "mae");
  if (map.data.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < map.data.size(); ++i) sum += std::abs(map.data[i] - (gt.data[i] ? 1.0 : 0.0));
  return sum / static_cast<double>(map.data.size());
}

double auc(const GrayMap& map, const BinaryMask& gt) {
  require_same_size(map, gt, "auc");
  const Histograms h = quantized_histograms(map, gt);
  if (h.positives == 0 || h.negatives == 0) {
    throw UndefinedAucError("auc: ground truth contains a single class");
  }
  // Cumulative counts of (q >= t); t = 256 is the (0,0) endpoint.
  std::array<std::uint64_t, kThresholdCount + 1> tp{}, fp{};
  for (int t = kThresholdCount - 1; t >= 0; --t) {
    tp[t] = tp[t + 1] + h.pos[t];
    fp[t] = fp[t + 1] + h.neg[t];
  }
  long double twice_area = 0.0L;
  for (int t = 0; t < kThresholdCount; ++t) {
    twice_area += static_cast<long double>(fp[t] - fp[t + 1]) * static_cast<long double>(tp[t] + tp[t + 1]);
  }
  return static_cast<double>(twice_area / (2.0L * h.positives * h.negatives));
}

PrCurve pr_curve(const GrayMap& map, const BinaryMask& gt) {
  require_same_size(map, gt, "pr_curve");
  const Histograms h = quantized_histograms(map, gt);
  PrCurve curve;
  std::uint64_t tp = 0, fp = 0;
  for (int t = kThresholdCount - 1; t >= 0; --t) {
    tp += h.pos[t];
    fp += h.neg[t];
    curve.precision[t] = tp + fp > 0 ? double(tp) / double(tp + fp) : 0.0;
    curve.recall[t] = h.positives > 0 ? double(tp) / double(h.positives) : 0.0;
  }
  return curve;
}

ImageMetrics evaluate_image(const std::string& name, const GrayMap& map, const BinaryMask& gt, PrCurve* curve) {
  ImageMetrics m;
  m.name = name;
  m.mae = mae(map, gt);
  try {
    m.auc = auc(map, gt);
  } catch (const UndefinedAucError&) {
    m.auc.reset();
  }
  const PrecisionRecall pr = pr_f_measure(binarize_adaptive(map), gt);
  m.precision = pr.precision;
  m.recall = pr.recall;
  m.f_measure = pr.f_measure;
  if (curve) *curve = pr_curve(map, gt);
  return m;
}

EvalReport aggregate_report(std::vector<ImageMetrics> per_image, const std::vector<PrCurve>& curves) {
  if (per_image.empty()) throw ContractError("no evaluated images");
  if (curves.size() != per_image.size()) throw ContractError("one PR curve per image required");

  std::vector<std::size_t> order(per_image.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return per_image[a].name < per_image[b].name; });

  EvalReport report;
  ImageMetrics& agg = report.aggregate;
  agg.name = "mean";
  double auc_sum = 0.0;
  for (std::size_t k : order) {
    const ImageMetrics& m = per_image[k];
    agg.mae += m.mae;
    agg.precision += m.precision;
    agg.recall += m.recall;
    agg.f_measure += m.f_measure;
    if (m.auc) {
      auc_sum += *m.auc;
      ++report.auc_count;
    } else {
      report.warnings.push_back(m.name + ": single-class ground truth, excluded from AUC");
    }
    for (int t = 0; t < kThresholdCount; ++t) {
      report.pr.precision[t] += curves[k].precision[t];
      report.pr.recall[t] += curves[k].recall[t];
    }
    report.per_image.push_back(m);
  }
  const double n = static_cast<double>(per_image.size());
  agg.mae /= n;
  agg.precision /= n;
  agg.recall /= n;
  agg.f_measure /= n;
  if (report.auc_count > 0) agg.auc = auc_sum / static_cast<double>(report.auc_count);
  for (int t = 0; t < kThresholdCount; ++t) {
    report.pr.precision[t] /= n;
    report.pr.recall[t] /= n;
  }
  return report;
}

EvalReport run_benchmark(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir) {
  std::vector<std::string> warnings;
  const auto preds = files_by_stem(pred_dir, warnings);
  const auto gts = files_by_stem(gt_dir, warnings);

  std::vector<ImageMetrics> metrics;
  std::vector<PrCurve> curves;
  for (const auto& [stem, pred_path] : preds) {
    const auto it = gts.find(stem);
    if (it == gts.end()) {
      warnings.push_back("no ground truth for " + pred_path.filename().string());
      continue;
    }
    try {
      const GrayMap map = load_gray_map(pred_path);
      const BinaryMask gt = load_mask(it->second);
      if (map.width != gt.width || map.height != gt.height) {
        warnings.push_back(stem + ": prediction and ground truth sizes differ, skipped");
        continue;
      }
      PrCurve curve;
      metrics.push_back(evaluate_image(stem, map, gt, &curve));
      curves.push_back(curve);
    } catch (const Error& e) {
      warnings.push_back(stem + ": " + e.what());
    }
  }
  for (const auto& [stem, gt_path] : gts) {
    if (!preds.count(stem)) warnings.push_back("no prediction for " + gt_path.filename().string());
  }
  if (metrics.empty()) {
    throw ContractError("no matched prediction/ground-truth pairs between " + pred_dir.string() + " and " +
                        gt_dir.string());
  }
  EvalReport report = aggregate_report(std::move(metrics), curves);
  warnings.insert(warnings.end(), report.warnings.begin(), report.warnings.end());
  report.warnings = std::move(warnings);
  return report;
}

void write_report_csv(const EvalReport& report, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto open = [&](const char* name) {
    std::ofstream out(out_dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + (out_dir / name).string());
    return out;
  };
  const auto auc_text = [](const std::optional<double>& a) { return a ? fixed6(*a) : std::string("nan"); };

  {
    std::ofstream out = open("per_image.csv");
    out << "name,mae,auc,precision,recall,f_measure\n";
    for (const ImageMetrics& m : report.per_image) {
      out << m.name << ',' << fixed6(m.mae) << ',' << auc_text(m.auc) << ',' << fixed6(m.precision) << ','
          << fixed6(m.recall) << ',' << fixed6(m.f_measure) << '\n';
    }
  }
  {
    std::ofstream out = open("pr_curve.csv");
    out << "threshold,precision,recall\n";
    for (int t = 0; t < kThresholdCount; ++t) {
      out << t << ',' << fixed6(report.pr.precision[t]) << ',' << fixed6(report.pr.recall[t]) << '\n';
    }
  }
  {
    std::ofstream out = open("summary.csv");
    const ImageMetrics& a = report.aggregate;
    out << "images,mae,auc,precision,recall,f_measure\n";
    out << report.per_image.size() << ',' << fixed6(a.mae) << ',' << auc_text(a.auc) << ',' << fixed6(a.precision)
        << ',' << fixed6(a.recall) << ',' << fixed6(a.f_measure) << '\n';
  }
}

}  // namespace saliency
