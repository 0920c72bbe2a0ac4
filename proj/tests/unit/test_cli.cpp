#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "saliency/cli.hpp"
#include "saliency/config.hpp"
#include "saliency/error.hpp"
#include "saliency/imageio.hpp"
#include "synthetic.hpp"

using namespace saliency;
namespace st = saliency::testing;
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Copies of the bundled natural images named img0, img1, ...
void make_inputs(const fs::path& dir, int count) {
  const auto natural = st::natural_images();
  for (int i = 0; i < count; ++i) {
    const fs::path& src = natural[i % natural.size()];
    fs::copy_file(src, dir / ("img" + std::to_string(i) + src.extension().string()));
  }
}

struct Captured {
  int code = 0;
  std::string out, err;
};

template <typename F>
Captured capture(F&& f) {
  std::ostringstream out, err;
  Captured c;
  c.code = f(out, err);
  c.out = out.str();
  c.err = err.str();
  return c;
}

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const std::string& value) : name_(name) { setenv(name, value.c_str(), 1); }
  ~ScopedEnv() { unsetenv(name_); }

 private:
  const char* name_;
};

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("defaults and overrides") {
    const PipelineConfig cfg = parse_config(R"({"target_k": 150, "affinity_exponent": "norm_sq",
                                                "background_seed_polarity": "inverted",
                                                "sigma_c_source": "geodesic_all_pairs", "alpha": 0.9})");
    CHECK(cfg.slic.target_k == 150);
    CHECK(cfg.slic.compactness == PipelineConfig{}.slic.compactness);
    CHECK(cfg.graph.exponent == AffinityExponent::kNormSquared);
    CHECK(cfg.background_seed_polarity == SeedPolarity::kInverted);
    CHECK(cfg.sigma_c_source == SigmaCSource::kGeodesicAllPairs);
    CHECK(cfg.graph.alpha == 0.9);
  }
  SUBCASE("echo round-trips") {
    PipelineConfig cfg;
    cfg.surroundedness.threshold_step = 12.0;
    cfg.graph.sigma_sq = 0.05;
    cfg.background_seed_polarity = SeedPolarity::kInverted;
    const std::string text = config_to_json(cfg);
    CHECK(config_to_json(parse_config(text)) == text);
  }
  SUBCASE("errors name the key") {
    const auto message = [](const std::string& text) {
      try {
        parse_config(text);
      } catch (const ConfigError& e) {
        return std::string(e.what());
      }
      return std::string("no error");
    };
    CHECK(message(R"({"sigma_sqq": 0.1})").find("sigma_sqq") != std::string::npos);
    CHECK(message(R"({"target_k": "many"})").find("target_k") != std::string::npos);
    CHECK(message(R"({"alpha": 1.5})").find("alpha") != std::string::npos);
    CHECK(message(R"({"affinity_exponent": "cube"})").find("affinity_exponent") != std::string::npos);
    CHECK(message("[1, 2]") != "no error");
    CHECK(message("{not json") != "no error");
  }
}

TEST_CASE("detect") {
  st::TempDir dir;
  const fs::path image = st::natural_images().front();
  const RgbImage input = load_image(image);

  SUBCASE("writes a map with the input dimensions and a config echo") {
    const fs::path out = dir.path() / "sub" / "map.png";
    const Captured c = capture([&](auto& o, auto& e) { return cli::cmd_detect({image, out, {}, {}}, o, e); });
    REQUIRE(c.code == cli::kExitOk);
    const GrayMap map = load_gray_map(out);
    CHECK(map.width == input.width);
    CHECK(map.height == input.height);
    CHECK(fs::exists(dir.path() / "sub" / "map.config.json"));
    CHECK(slurp(dir.path() / "sub" / "map.config.json") == config_to_json(PipelineConfig{}));
  }
  SUBCASE("reruns are byte-identical and the echo reproduces them") {
    const fs::path cfg = dir.path() / "cfg.json";
    write_text(cfg, R"({"target_k": 120, "background_seed_polarity": "inverted"})");
    const fs::path a = dir.path() / "a.png", b = dir.path() / "b.png", c = dir.path() / "c.png";
    std::ostringstream o, e;
    REQUIRE(cli::cmd_detect({image, a, cfg, {}}, o, e) == cli::kExitOk);
    REQUIRE(cli::cmd_detect({image, b, cfg, {}}, o, e) == cli::kExitOk);
    REQUIRE(cli::cmd_detect({image, c, dir.path() / "a.config.json", {}}, o, e) == cli::kExitOk);
    CHECK(st::read_file(a) == st::read_file(b));
    CHECK(st::read_file(a) == st::read_file(c));
    CHECK(slurp(dir.path() / "a.config.json") == slurp(dir.path() / "c.config.json"));
  }
  SUBCASE("dump-intermediate writes every stage") {
    const fs::path dump = dir.path() / "dump";
    std::ostringstream o, e;
    REQUIRE(cli::cmd_detect({image, dir.path() / "m.png", {}, dump}, o, e) == cli::kExitOk);
    for (const char* name : {"sb.png", "sp.png", "fg.png", "bg.png", "com.png", "final.png"}) {
      CAPTURE(name);
      const GrayMap m = load_gray_map(dump / name);
      CHECK(m.width == input.width);
    }
    CHECK(st::read_file(dump / "final.png") == st::read_file(dir.path() / "m.png"));
  }
  SUBCASE("bad config key exits 2 naming the key") {
    const fs::path cfg = dir.path() / "bad.json";
    write_text(cfg, R"({"compactnes": 10})");
    const Captured c =
        capture([&](auto& o, auto& e) { return cli::cmd_detect({image, dir.path() / "x.png", cfg, {}}, o, e); });
    CHECK(c.code == cli::kExitConfig);
    CHECK(c.err.find("compactnes") != std::string::npos);
    CHECK_FALSE(fs::exists(dir.path() / "x.png"));
  }
  SUBCASE("unreadable input exits 1") {
    const Captured c = capture([&](auto& o, auto& e) {
      return cli::cmd_detect({dir.path() / "missing.png", dir.path() / "x.png", {}, {}}, o, e);
    });
    CHECK(c.code == cli::kExitIo);
    CHECK_FALSE(c.err.empty());
  }
  SUBCASE("SALIENCY_CONFIG is the fallback config path") {
    const fs::path cfg = dir.path() / "env_bad.json";
    write_text(cfg, R"({"not_a_key": 1})");
    ScopedEnv env("SALIENCY_CONFIG", cfg.string());
    CHECK(cli::resolve_config_path(std::nullopt) == cfg);
    const Captured c =
        capture([&](auto& o, auto& e) { return cli::cmd_detect({image, dir.path() / "x.png", {}, {}}, o, e); });
    CHECK(c.code == cli::kExitConfig);
    CHECK(c.err.find("not_a_key") != std::string::npos);

    // An explicit flag wins over the environment.
    const fs::path good = dir.path() / "good.json";
    write_text(good, "{}");
    CHECK(cli::resolve_config_path(good) == good);
    const Captured ok =
        capture([&](auto& o, auto& e) { return cli::cmd_detect({image, dir.path() / "y.png", good, {}}, o, e); });
    CHECK(ok.code == cli::kExitOk);
  }
}

TEST_CASE("batch") {
  st::TempDir in, out1, out4;
  make_inputs(in.path(), 3);

  SUBCASE("one map per input, identical across job counts") {
    std::ostringstream o, e;
    REQUIRE(cli::cmd_batch({in.path(), out1.path(), {}, 1}, o, e) == cli::kExitOk);
    REQUIRE(cli::cmd_batch({in.path(), out4.path(), {}, 4}, o, e) == cli::kExitOk);
    for (int i = 0; i < 3; ++i) {
      const std::string name = "img" + std::to_string(i) + ".png";
      CAPTURE(name);
      REQUIRE(fs::exists(out1.path() / name));
      CHECK(st::read_file(out1.path() / name) == st::read_file(out4.path() / name));
    }
    CHECK(fs::exists(out1.path() / "config.json"));
  }
  SUBCASE("a corrupt input is skipped with a warning") {
    fs::remove(in.path() / "img1.png");
    fs::copy_file(st::data_dir() / "fixtures" / "truncated.png", in.path() / "img1.png");
    const Captured c = capture([&](auto& o, auto& e) { return cli::cmd_batch({in.path(), out1.path(), {}, 2}, o, e); });
    CHECK(c.code == cli::kExitOk);
    CHECK(c.err.find("img1.png") != std::string::npos);
    CHECK(fs::exists(out1.path() / "img0.png"));
    CHECK(fs::exists(out1.path() / "img2.png"));
    CHECK_FALSE(fs::exists(out1.path() / "img1.png"));
  }
  SUBCASE("empty input directory exits 1") {
    st::TempDir empty;
    std::ostringstream o, e;
    CHECK(cli::cmd_batch({empty.path(), out1.path(), {}, 1}, o, e) == cli::kExitIo);
  }
}

TEST_CASE("eval") {
  st::TempDir pred, gt, out;
  for (int i = 0; i < 3; ++i) {
    GrayMap m(20, 10, 0.0);
    for (int y = 2; y < 8; ++y) {
      for (int x = 3 + i; x < 12 + i; ++x) m.at(x, y) = 1.0;
    }
    write_gray_png(m, gt.path() / ("s" + std::to_string(i) + ".png"));
    write_gray_png(m, pred.path() / ("s" + std::to_string(i) + ".png"));
  }

  SUBCASE("pred equal to gt") {
    const Captured c =
        capture([&](auto& o, auto& e) { return cli::cmd_eval({pred.path(), gt.path(), out.path()}, o, e); });
    REQUIRE(c.code == cli::kExitOk);
    CHECK(c.out.find("MAE 0.000000") != std::string::npos);
    CHECK(c.out.find("AUC 1.000000") != std::string::npos);
    for (const char* f : {"per_image.csv", "pr_curve.csv", "summary.csv"}) CHECK(fs::exists(out.path() / f));
  }
  SUBCASE("mismatched stems only") {
    st::TempDir other;
    write_gray_png(GrayMap(20, 10, 0.5), other.path() / "zzz.png");
    const Captured c =
        capture([&](auto& o, auto& e) { return cli::cmd_eval({other.path(), gt.path(), out.path()}, o, e); });
    CHECK(c.code == cli::kExitIo);
  }
}

TEST_CASE("the saliency executable") {
  st::TempDir dir;
  std::string text;
  CHECK(st::run_cli_binary("--help", &text) == 0);
  CHECK(text.find("detect") != std::string::npos);
  CHECK(st::run_cli_binary("", &text) == cli::kExitConfig);
  CHECK(st::run_cli_binary("detect --out " + (dir.path() / "m.png").string(), &text) == cli::kExitConfig);
  CHECK(st::run_cli_binary("detect " + (dir.path() / "nope.png").string() + " --out " + (dir.path() / "m.png").string(),
                           &text) == cli::kExitIo);

  const std::string image = st::natural_images().front().string();
  REQUIRE(st::run_cli_binary("detect " + image + " --out " + (dir.path() / "m.png").string(), &text) == 0);
  CHECK(fs::exists(dir.path() / "m.png"));

  fs::create_directories(dir.path() / "gt");
  fs::copy_file(dir.path() / "m.png", dir.path() / "gt" / "m.png");
  fs::create_directories(dir.path() / "pred");
  fs::copy_file(dir.path() / "m.png", dir.path() / "pred" / "m.png");
  REQUIRE(st::run_cli_binary("eval " + (dir.path() / "pred").string() + " " + (dir.path() / "gt").string() +
                                 " --out " + (dir.path() / "report").string(),
                             &text) == 0);
  CHECK(text.find("MAE") != std::string::npos);
  CHECK(text.find("AUC") != std::string::npos);
}
