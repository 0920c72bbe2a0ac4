#include "saliency/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "saliency/config.hpp"
#include "saliency/error.hpp"
#include "saliency/eval.hpp"
#include "saliency/imageio.hpp"
#include "saliency/pipeline.hpp"

namespace saliency::cli {
namespace {

namespace fs = std::filesystem;

PipelineConfig resolve_config(const std::optional<fs::path>& flag) {
  const std::optional<fs::path> path = resolve_config_path(flag);
  return path ? load_config(*path) : PipelineConfig{};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

fs::path config_echo_path(const fs::path& out) {
  fs::path p = out;
  p.replace_extension(".config.json");
  return p;
}

void dump_intermediates(const Detection& det, const fs::path& dir) {
  fs::create_directories(dir);
  write_gray_png(det.surroundedness.data.empty() ? det.map : det.surroundedness, dir / "sb.png");
  if (det.segmentation.count == 0) return;
  const Segmentation& seg = det.segmentation;
  write_gray_png(render_map(det.surroundedness_per_superpixel, seg), dir / "sp.png");
  write_gray_png(render_map(det.foreground.values, seg), dir / "fg.png");
  write_gray_png(render_map(det.background.values, seg), dir / "bg.png");
  write_gray_png(render_map(det.combined.values, seg), dir / "com.png");
  write_gray_png(render_map(det.final.values, seg), dir / "final.png");
  write_label_png(seg, dir / "labels.png");
}

std::vector<fs::path> list_images(const fs::path& dir) {
  std::vector<fs::path> files;
  if (!fs::is_directory(dir)) return files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::optional<fs::path> resolve_config_path(const std::optional<fs::path>& flag) {
  if (flag) return flag;
  if (const char* env = std::getenv("SALIENCY_CONFIG"); env && *env) return fs::path(env);
  return std::nullopt;
}

int cmd_detect(const DetectOptions& opts, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg;
  try {
    cfg = resolve_config(opts.config);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    const RgbImage img = load_image(opts.image);
    const Detection det = detect_detailed(img, cfg);
    for (const std::string& w : det.warnings) err << "warning: " << opts.image.filename().string() << ": " << w << '\n';
    if (opts.out.has_parent_path()) fs::create_directories(opts.out.parent_path());
    write_gray_png(det.map, opts.out);
    write_text(config_echo_path(opts.out), config_to_json(cfg));
    if (opts.dump_dir) dump_intermediates(det, *opts.dump_dir);
    out << "wrote " << opts.out.string() << '\n';
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

int cmd_batch(const BatchOptions& opts, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg;
  try {
    cfg = resolve_config(opts.config);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  const std::vector<fs::path> images = list_images(opts.image_dir);
  if (images.empty()) {
    err << "error: no PNG/JPEG images in " << opts.image_dir.string() << '\n';
    return kExitIo;
  }
  try {
    fs::create_directories(opts.out_dir);
    write_text(opts.out_dir / "config.json", config_to_json(cfg));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }

  std::vector<std::string> failures(images.size());
  std::vector<std::vector<std::string>> warnings(images.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < images.size(); i = next++) {
      try {
        const Detection det = detect_detailed(load_image(images[i]), cfg);
        warnings[i] = det.warnings;
        write_gray_png(det.map, opts.out_dir / (images[i].stem().string() + ".png"));
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(images.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::size_t ok = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string name = images[i].filename().string();
    for (const std::string& w : warnings[i]) err << "warning: " << name << ": " << w << '\n';
    if (failures[i].empty()) {
      ++ok;
    } else {
      err << "warning: " << name << " failed: " << failures[i] << '\n';
    }
  }
  out << ok << " of " << images.size() << " images processed\n";
  return ok > 0 ? kExitOk : kExitIo;
}

int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const EvalReport report = run_benchmark(opts.pred_dir, opts.gt_dir);
    for (const std::string& w : report.warnings) err << "warning: " << w << '\n';
    write_report_csv(report, opts.out_dir);
    const ImageMetrics& a = report.aggregate;
    out << "images " << report.per_image.size() << "  MAE " << fixed(a.mae, 6) << "  AUC "
        << (a.auc ? fixed(*a.auc, 6) : std::string("nan")) << "  precision " << fixed(a.precision, 6)
        << "  recall " << fixed(a.recall, 6) << "  F-measure " << fixed(a.f_measure, 6) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Salient object detection from foreground and background seeds"};
  app.require_subcommand(1);

  DetectOptions detect;
  std::string detect_config, dump_dir;
  CLI::App* detect_cmd = app.add_subcommand("detect", "Compute the saliency map of one image");
  detect_cmd->add_option("image", detect.image, "Input PNG/JPEG")->required();
  detect_cmd->add_option("--out", detect.out, "Output PNG path")->required();
  detect_cmd->add_option("--config", detect_config, "JSON pipeline config");
  detect_cmd->add_option("--dump-intermediate", dump_dir, "Directory for intermediate maps");

  BatchOptions batch;
  std::string batch_config;
  CLI::App* batch_cmd = app.add_subcommand("batch", "Compute saliency maps for every image in a directory");
  batch_cmd->add_option("image_dir", batch.image_dir, "Input directory")->required();
  batch_cmd->add_option("--out", batch.out_dir, "Output directory")->required();
  batch_cmd->add_option("--config", batch_config, "JSON pipeline config");
  batch_cmd->add_option("--jobs", batch.jobs, "Worker threads")->check(CLI::PositiveNumber);

  EvalOptions eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score saliency maps against ground truth masks");
  eval_cmd->add_option("pred_dir", eval.pred_dir, "Directory of saliency maps")->required();
  eval_cmd->add_option("gt_dir", eval.gt_dir, "Directory of ground truth masks")->required();
  eval_cmd->add_option("--out", eval.out_dir, "Directory for CSV reports")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*detect_cmd) {
    if (!detect_config.empty()) detect.config = detect_config;
    if (!dump_dir.empty()) detect.dump_dir = dump_dir;
    return cmd_detect(detect, out, err);
  }
  if (*batch_cmd) {
    if (!batch_config.empty()) batch.config = batch_config;
    return cmd_batch(batch, out, err);
  }
  return cmd_eval(eval, out, err);
}

}  // namespace saliency::cli
