#pragma once

#include <cstdint>
#include <filesystem>
#include <span>

#include "saliency/image.hpp"

namespace saliency {

struct Segmentation;

/// Decodes a PNG or JPEG file into 8-bit sRGB. Grayscale sources are expanded
/// to three equal channels; alpha is dropped; 16-bit sources are scaled down.
/// Throws IoError when the file cannot be read and FormatError when it is not
/// a decodable PNG/JPEG.
RgbImage load_image(const std::filesystem::path& path);

/// Loads an 8-bit map as values v/255. Color inputs are averaged per pixel.
GrayMap load_gray_map(const std::filesystem::path& path);

/// Loads a ground-truth mask; a pixel is foreground iff its value > 127.
BinaryMask load_mask(const std::filesystem::path& path);

/// sRGB (IEC 61966-2-1) -> linear RGB -> XYZ (D65, 2 degree) -> CIELAB.
Lab srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);
LabImage rgb_to_lab(const RgbImage& img);

/// Paints each pixel with its superpixel's value, then min-max normalizes.
/// A constant input renders to all zeros.
GrayMap render_map(std::span<const double> values, const Segmentation& seg);

/// Byte value written for a map value: round-half-up of 255*v, clamped.
std::uint8_t to_byte(double v);

void write_gray_png(const GrayMap& map, const std::filesystem::path& path);

/// Debug dump of superpixel labels as a 16-bit PNG (pixel value = id).
void write_label_png(const Segmentation& seg, const std::filesystem::path& path);

}  // namespace saliency
