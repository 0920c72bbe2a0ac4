#include "saliency/imageio.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iterator>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "saliency/error.hpp"
#include "saliency/pipeline.hpp"
#include "saliency/superpixel.hpp"

namespace saliency {
namespace {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading " + path.string());
  return bytes;
}

bool is_png(const std::vector<std::uint8_t>& b) {
  static constexpr std::array<std::uint8_t, 8> kSig = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  return b.size() >= kSig.size() && std::equal(kSig.begin(), kSig.end(), b.begin());
}

bool is_jpeg(const std::vector<std::uint8_t>& b) {
  return b.size() >= 3 && b[0] == 0xFF && b[1] == 0xD8 && b[2] == 0xFF;
}

// Decoded 8-bit image with 1 or 3 channels (BGR order for 3).
cv::Mat decode(const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes = read_bytes(path);
  if (!is_png(bytes) && !is_jpeg(bytes)) throw FormatError(path.string() + " is not a PNG or JPEG file");

  cv::Mat decoded;
  try {
    decoded = cv::imdecode(bytes, cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw FormatError("cannot decode " + path.string() + ": " + e.what());
  }
  if (decoded.empty()) throw FormatError("cannot decode " + path.string());

  if (decoded.depth() == CV_16U) {
    decoded.convertTo(decoded, CV_8U, 1.0 / 257.0);
  } else if (decoded.depth() != CV_8U) {
    throw FormatError(path.string() + ": unsupported sample depth");
  }
  cv::Mat out;
  switch (decoded.channels()) {
    case 1:
    case 3:
      out = decoded;
      break;
    case 2:  // gray + alpha
    {
      std::vector<cv::Mat> planes;
      cv::split(decoded, planes);
      out = planes[0];
      break;
    }
    case 4: {
      std::vector<cv::Mat> planes;
      cv::split(decoded, planes);
      planes.pop_back();
      cv::merge(planes, out);
      break;
    }
    default:
      throw FormatError(path.string() + ": unsupported channel count");
  }
  return out;
}

void encode_png(const cv::Mat& mat, const std::filesystem::path& path) {
  std::vector<std::uint8_t> buf;
  // Fixed compression settings so identical maps give identical files.
  const std::vector<int> params = {cv::IMWRITE_PNG_COMPRESSION, 6, cv::IMWRITE_PNG_STRATEGY,
                                   cv::IMWRITE_PNG_STRATEGY_DEFAULT};
  if (!cv::imencode(".png", mat, buf, params)) throw IoError("PNG encoding failed for " + path.string());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

RgbImage::RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

void RgbImage::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  std::uint8_t* p = pixel(x, y);
  p[0] = r;
  p[1] = g;
  p[2] = b;
}

RgbImage load_image(const std::filesystem::path& path) {
  const cv::Mat m = decode(path);
  RgbImage img(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y) {
    const std::uint8_t* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < m.cols; ++x) {
      if (m.channels() == 1) {
        img.set(x, y, row[x], row[x], row[x]);
      } else {
        img.set(x, y, row[3 * x + 2], row[3 * x + 1], row[3 * x]);
      }
    }
  }
  return img;
}

namespace {

// Per-pixel gray level in [0,255]; color inputs are averaged.
GrayMap gray_levels(const std::filesystem::path& path) {
  const cv::Mat m = decode(path);
  GrayMap map(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y) {
    const std::uint8_t* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < m.cols; ++x) {
      map.at(x, y) = m.channels() == 1 ? row[x] : (row[3 * x] + row[3 * x + 1] + row[3 * x + 2]) / 3.0;
    }
  }
  return map;
}

}  // namespace

GrayMap load_gray_map(const std::filesystem::path& path) {
  GrayMap map = gray_levels(path);
  for (double& v : map.data) v /= 255.0;
  return map;
}

BinaryMask load_mask(const std::filesystem::path& path) {
  const GrayMap g = gray_levels(path);
  BinaryMask mask(g.width, g.height);
  for (std::size_t i = 0; i < g.data.size(); ++i) mask.data[i] = g.data[i] > 127.0 ? 1 : 0;
  return mask;
}

GrayMap render_map(std::span<const double> values, const Segmentation& seg) {
  if (static_cast<int>(values.size()) != seg.count) {
    throw ContractError("render_map: " + std::to_string(values.size()) + " values for " +
                        std::to_string(seg.count) + " superpixels");
  }
  const std::vector<double> norm = min_max(values);
  GrayMap out(seg.width, seg.height);
  for (std::size_t i = 0; i < seg.labels.size(); ++i) out.data[i] = norm[seg.labels[i]];
  return out;
}

std::uint8_t to_byte(double v) {
  const double scaled = std::floor(255.0 * std::clamp(v, 0.0, 1.0) + 0.5);
  return static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
}

void write_gray_png(const GrayMap& map, const std::filesystem::path& path) {
  cv::Mat m(map.height, map.width, CV_8UC1);
  for (int y = 0; y < map.height; ++y) {
    std::uint8_t* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < map.width; ++x) row[x] = to_byte(map.at(x, y));
  }
  encode_png(m, path);
}

void write_label_png(const Segmentation& seg, const std::filesystem::path& path) {
  if (seg.count > 65536) throw ContractError("too many superpixels for a 16-bit label dump");
  cv::Mat m(seg.height, seg.width, CV_16UC1);
  for (int y = 0; y < seg.height; ++y) {
    std::uint16_t* row = m.ptr<std::uint16_t>(y);
    for (int x = 0; x < seg.width; ++x) row[x] = static_cast<std::uint16_t>(seg.label(x, y));
  }
  encode_png(m, path);
}

}  // namespace saliency
