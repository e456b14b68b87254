#include "sdfeat/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdfeat/error.hpp"

namespace sdfeat {

GrayImage::GrayImage(std::size_t width, std::size_t height, std::uint8_t fill)
    : width_(width), height_(height), pixels_(width * height, fill) {}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != width_ * height_) {
    throw DimensionError("GrayImage: " + std::to_string(pixels_.size()) + " pixels for " +
                         std::to_string(width_) + "x" + std::to_string(height_));
  }
}

RealImage::RealImage(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), values_(width * height, fill) {}

RealImage::RealImage(std::size_t width, std::size_t height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (values_.size() != width_ * height_) {
    throw DimensionError("RealImage: value count does not match dimensions");
  }
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw RangeError("RealImage: non-finite value");
  }
}

std::uint8_t round_to_u8(double x) {
  const double r = std::floor(x + 0.5);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

GrayImage to_grayscale(const GrayImage& red, const GrayImage& green, const GrayImage& blue) {
  if (red.width() != green.width() || red.width() != blue.width() ||
      red.height() != green.height() || red.height() != blue.height()) {
    throw DimensionError("to_grayscale: channel dimensions differ");
  }
  GrayImage out(red.width(), red.height());
  auto r = red.pixels();
  auto g = green.pixels();
  auto b = blue.pixels();
  auto o = out.pixels();
  for (std::size_t i = 0; i < o.size(); ++i) {
    o[i] = round_to_u8(0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i]);
  }
  return out;
}

BitPlaneStack bit_planes(const GrayImage& img, int depth) {
  if (depth < 1 || depth > 8) {
    throw ConfigError("bit_planes: depth must be in [1, 8], got " + std::to_string(depth));
  }
  const unsigned limit = 1u << depth;
  BitPlaneStack stack;
  stack.width = img.width();
  stack.height = img.height();
  stack.planes.assign(static_cast<std::size_t>(depth), std::vector<std::uint8_t>(img.size()));
  auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (px[i] >= limit) {
      throw RangeError("bit_planes: pixel value " + std::to_string(px[i]) + " exceeds " +
                       std::to_string(depth) + " bits");
    }
    for (int p = 0; p < depth; ++p) {
      stack.planes[static_cast<std::size_t>(p)][i] = static_cast<std::uint8_t>((px[i] >> p) & 1u);
    }
  }
  return stack;
}

GrayImage BitPlaneStack::reconstruct() const {
  GrayImage out(width, height);
  auto o = out.pixels();
  for (std::size_t p = 0; p < planes.size(); ++p) {
    for (std::size_t i = 0; i < o.size(); ++i) {
      o[i] = static_cast<std::uint8_t>(o[i] | (planes[p][i] << p));
    }
  }
  return out;
}

GrayImage quantize(const RealImage& img, QuantizeMode mode) {
  GrayImage out(img.width(), img.height());
  auto in = img.values();
  auto o = out.pixels();
  if (in.empty()) return out;

  switch (mode) {
    case QuantizeMode::minmax_0_255: {
      const auto [lo, hi] = std::minmax_element(in.begin(), in.end());
      const double min = *lo;
      const double range = *hi - min;
      if (range <= 0.0) return out;
      for (std::size_t i = 0; i < in.size(); ++i) {
        o[i] = round_to_u8((in[i] - min) * 255.0 / range);
      }
      break;
    }
    case QuantizeMode::direction_degrees:
      for (std::size_t i = 0; i < in.size(); ++i) {
        if (in[i] < 0.0 || in[i] > 180.0) {
          throw RangeError("quantize: direction value outside [0, 180]");
        }
        o[i] = round_to_u8(in[i]);
      }
      break;
  }
  return out;
}

GrayImage resize_bilinear(const GrayImage& img, std::size_t width, std::size_t height) {
  if (width == 0 || height == 0 || img.empty()) {
    throw DimensionError("resize_bilinear: empty source or target");
  }
  if (width == img.width() && height == img.height()) return img;

  GrayImage out(width, height);
  const double sx = static_cast<double>(img.width()) / static_cast<double>(width);
  const double sy = static_cast<double>(img.height()) / static_cast<double>(height);
  const double max_x = static_cast<double>(img.width() - 1);
  const double max_y = static_cast<double>(img.height() - 1);
  for (std::size_t r = 0; r < height; ++r) {
    const double y = std::clamp((static_cast<double>(r) + 0.5) * sy - 0.5, 0.0, max_y);
    const auto y0 = static_cast<std::size_t>(y);
    const std::size_t y1 = std::min(y0 + 1, img.height() - 1);
    const double fy = y - static_cast<double>(y0);
    for (std::size_t c = 0; c < width; ++c) {
      const double x = std::clamp((static_cast<double>(c) + 0.5) * sx - 0.5, 0.0, max_x);
      const auto x0 = static_cast<std::size_t>(x);
      const std::size_t x1 = std::min(x0 + 1, img.width() - 1);
      const double fx = x - static_cast<double>(x0);
      const double top = img.at(y0, x0) * (1.0 - fx) + img.at(y0, x1) * fx;
      const double bottom = img.at(y1, x0) * (1.0 - fx) + img.at(y1, x1) * fx;
      out.at(r, c) = round_to_u8(top * (1.0 - fy) + bottom * fy);
    }
  }
  return out;
}

}  // namespace sdfeat
