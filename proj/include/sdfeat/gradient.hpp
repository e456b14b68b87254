#pragma once

#include <array>
#include <string_view>

#include "sdfeat/imaging.hpp"

namespace sdfeat {

using Kernel3 = std::array<std::array<int, 3>, 3>;

enum class GradientMask { sobel, prewitt };

struct GradientKernel {
  GradientMask mask;
  Kernel3 kx;
  Kernel3 ky;  ///< transpose of kx
};

GradientKernel gradient_kernel(GradientMask mask);

std::string_view to_string(GradientMask mask);
GradientMask parse_gradient_mask(std::string_view name);

/// 3x3 filter with replicate-edge borders; output has the input dimensions.
/// The kernel is applied without flipping, so kx responds positively to
/// intensity rising left-to-right.
RealImage convolve(const GrayImage& img, const Kernel3& kernel);

/// sqrt(gx^2 + gy^2) per pixel.
RealImage gradient_magnitude(const RealImage& gx, const RealImage& gy);

/// arctan(gy / gx) in degrees, shifted by +90 into [0, 180].
/// gx == 0 maps to 180 (gy > 0), 0 (gy < 0) or 90 (gy == 0).
RealImage gradient_direction(const RealImage& gx, const RealImage& gy);

double direction_degrees(double gx, double gy);

struct GradientChannels {
  RealImage magnitude;
  RealImage direction;
};

GradientChannels compute_gradients(const GrayImage& img, GradientMask mask);

}  // namespace sdfeat
