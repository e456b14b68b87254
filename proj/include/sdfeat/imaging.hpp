#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sdfeat {

/// 8-bit single-channel raster, row-major.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(std::size_t width, std::size_t height, std::uint8_t fill = 0);
  GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t at(std::size_t row, std::size_t col) const { return pixels_[row * width_ + col]; }
  std::uint8_t& at(std::size_t row, std::size_t col) { return pixels_[row * width_ + col]; }

  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::span<std::uint8_t> pixels() { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Real-valued raster used for intermediate filter output. All values finite.
class RealImage {
 public:
  RealImage() = default;
  RealImage(std::size_t width, std::size_t height, double fill = 0.0);
  RealImage(std::size_t width, std::size_t height, std::vector<double> values);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return values_.size(); }

  double at(std::size_t row, std::size_t col) const { return values_[row * width_ + col]; }
  double& at(std::size_t row, std::size_t col) { return values_[row * width_ + col]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> values_;
};

/// P binary planes of one image; plane p holds bit p (p = 0 is the LSB).
struct BitPlaneStack {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::vector<std::uint8_t>> planes;

  std::size_t depth() const { return planes.size(); }
  GrayImage reconstruct() const;
};

inline constexpr int kDefaultBitDepth = 8;

/// round(0.299 R + 0.587 G + 0.114 B), half-up, clamped to [0, 255].
GrayImage to_grayscale(const GrayImage& red, const GrayImage& green, const GrayImage& blue);

/// Throws RangeError when a pixel needs more than `depth` bits.
BitPlaneStack bit_planes(const GrayImage& img, int depth = kDefaultBitDepth);

enum class QuantizeMode {
  minmax_0_255,       ///< linear [min, max] -> [0, 255]; constant input -> 0
  direction_degrees,  ///< round to nearest degree, input must lie in [0, 180]
};

GrayImage quantize(const RealImage& img, QuantizeMode mode);

/// Bilinear resample to the requested size (pixel-center aligned, edge clamped).
GrayImage resize_bilinear(const GrayImage& img, std::size_t width, std::size_t height);

/// floor(x + 0.5) clamped to [0, 255].
std::uint8_t round_to_u8(double x);

}  // namespace sdfeat
