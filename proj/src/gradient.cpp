#include "sdfeat/gradient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sdfeat/error.hpp"

namespace sdfeat {
namespace {

Kernel3 transpose(const Kernel3& k) {
  Kernel3 t{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) t[c][r] = k[r][c];
  return t;
}

void require_same_shape(const RealImage& a, const RealImage& b, const char* op) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionError(std::string(op) + ": gx and gy dimensions differ");
  }
}

}  // namespace

GradientKernel gradient_kernel(GradientMask mask) {
  Kernel3 kx = mask == GradientMask::sobel
                   ? Kernel3{{{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}}}
                   : Kernel3{{{-1, 0, 1}, {-1, 0, 1}, {-1, 0, 1}}};
  return {mask, kx, transpose(kx)};
}

std::string_view to_string(GradientMask mask) {
  return mask == GradientMask::sobel ? "sobel" : "prewitt";
}

GradientMask parse_gradient_mask(std::string_view name) {
  if (name == "sobel") return GradientMask::sobel;
  if (name == "prewitt") return GradientMask::prewitt;
  throw ConfigError("unknown gradient mask '" + std::string(name) + "'");
}

RealImage convolve(const GrayImage& img, const Kernel3& kernel) {
  if (img.width() < 3 || img.height() < 3) {
    throw DimensionError("convolve: image must be at least 3x3");
  }
  const auto w = static_cast<std::ptrdiff_t>(img.width());
  const auto h = static_cast<std::ptrdiff_t>(img.height());
  RealImage out(img.width(), img.height());
  for (std::ptrdiff_t r = 0; r < h; ++r) {
    for (std::ptrdiff_t c = 0; c < w; ++c) {
      int acc = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        const auto rr = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(r + dr, 0, h - 1));
        for (int dc = -1; dc <= 1; ++dc) {
          const auto cc = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(c + dc, 0, w - 1));
          acc += kernel[dr + 1][dc + 1] * img.at(rr, cc);
        }
      }
      out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = acc;
    }
  }
  return out;
}

RealImage gradient_magnitude(const RealImage& gx, const RealImage& gy) {
  require_same_shape(gx, gy, "gradient_magnitude");
  RealImage out(gx.width(), gx.height());
  auto x = gx.values();
  auto y = gy.values();
  auto o = out.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = std::sqrt(x[i] * x[i] + y[i] * y[i]);
  return out;
}

double direction_degrees(double gx, double gy) {
  double theta;
  if (gx == 0.0) {
    theta = gy > 0.0 ? 90.0 : (gy < 0.0 ? -90.0 : 0.0);
  } else {
    theta = std::atan(gy / gx) * 180.0 / std::numbers::pi;
  }
  return std::clamp(theta + 90.0, 0.0, 180.0);
}

RealImage gradient_direction(const RealImage& gx, const RealImage& gy) {
  require_same_shape(gx, gy, "gradient_direction");
  RealImage out(gx.width(), gx.height());
  auto x = gx.values();
  auto y = gy.values();
  auto o = out.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = direction_degrees(x[i], y[i]);
  return out;
}

GradientChannels compute_gradients(const GrayImage& img, GradientMask mask) {
  const GradientKernel k = gradient_kernel(mask);
  const RealImage gx = convolve(img, k.kx);
  const RealImage gy = convolve(img, k.ky);
  return {gradient_magnitude(gx, gy), gradient_direction(gx, gy)};
}

}  // namespace sdfeat
