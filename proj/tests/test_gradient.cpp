#include <doctest.h>

#include "sdfeat/error.hpp"
#include "sdfeat/gradient.hpp"
#include "sdfeat/rng.hpp"

using namespace sdfeat;

namespace {

GrayImage horizontal_ramp(std::size_t w, std::size_t h) {
  GrayImage img(w, h);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) img.at(r, c) = static_cast<std::uint8_t>(c);
  return img;
}

}  // namespace

TEST_CASE("kernel constants") {
  const auto sobel = gradient_kernel(GradientMask::sobel);
  const auto prewitt = gradient_kernel(GradientMask::prewitt);
  CHECK(sobel.kx == Kernel3{{{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}}});
  CHECK(prewitt.kx == Kernel3{{{-1, 0, 1}, {-1, 0, 1}, {-1, 0, 1}}});
  for (const auto& k : {sobel, prewitt}) {
    int sum = 0;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        sum += k.kx[r][c];
        CHECK(k.ky[r][c] == k.kx[c][r]);
      }
    CHECK(sum == 0);
  }
}

TEST_CASE("convolve on a constant image is zero") {
  const GrayImage flat(8, 8, 123);
  for (auto mask : {GradientMask::sobel, GradientMask::prewitt}) {
    const auto k = gradient_kernel(mask);
    const auto gx = convolve(flat, k.kx);
    const auto gy = convolve(flat, k.ky);
    for (double v : gx.values()) CHECK(v == 0.0);
    for (double v : gy.values()) CHECK(v == 0.0);
  }
}

TEST_CASE("convolve on a horizontal ramp") {
  const auto ramp = horizontal_ramp(10, 6);
  const auto sobel = gradient_kernel(GradientMask::sobel);
  const auto prewitt = gradient_kernel(GradientMask::prewitt);
  const auto sx = convolve(ramp, sobel.kx);
  const auto sy = convolve(ramp, sobel.ky);
  const auto px = convolve(ramp, prewitt.kx);
  for (std::size_t r = 1; r + 1 < 6; ++r) {
    for (std::size_t c = 1; c + 1 < 10; ++c) {
      CHECK(sx.at(r, c) == 8.0);
      CHECK(px.at(r, c) == 6.0);
      CHECK(sy.at(r, c) == 0.0);
    }
  }
  // Replicated edge: column 0 sees (1 - 0) instead of (1 - (-1)).
  CHECK(sx.at(2, 0) == 4.0);
}

TEST_CASE("convolve needs at least 3x3") {
  CHECK_THROWS_AS(convolve(GrayImage(2, 5), gradient_kernel(GradientMask::sobel).kx), DimensionError);
}

TEST_CASE("gradient magnitude") {
  const RealImage gx(3, 1, std::vector<double>{3.0, 0.0, 8.0});
  const RealImage gy(3, 1, std::vector<double>{4.0, 0.0, 0.0});
  const auto mag = gradient_magnitude(gx, gy);
  CHECK(mag.at(0, 0) == 5.0);
  CHECK(mag.at(0, 1) == 0.0);
  CHECK(mag.at(0, 2) == 8.0);
  CHECK_THROWS_AS(gradient_magnitude(RealImage(2, 1), RealImage(1, 2)), DimensionError);
}

TEST_CASE("gradient direction") {
  CHECK(direction_degrees(8.0, 0.0) == 90.0);
  CHECK(direction_degrees(1.0, 1.0) == doctest::Approx(135.0).epsilon(1e-12));
  CHECK(direction_degrees(0.0, 0.0) == 90.0);
  CHECK(direction_degrees(0.0, 5.0) == 180.0);
  CHECK(direction_degrees(0.0, -5.0) == 0.0);
  CHECK(direction_degrees(-1.0, 1.0) == doctest::Approx(45.0).epsilon(1e-12));
  CHECK_THROWS_AS(gradient_direction(RealImage(2, 1), RealImage(3, 1)), DimensionError);
}

TEST_CASE("direction range and magnitude sign symmetry") {
  SplitMix64 rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double gx = (rng.next_unit() - 0.5) * 2000.0 * (i % 7 == 0 ? 0.0 : 1.0);
    const double gy = (rng.next_unit() - 0.5) * 2000.0 * (i % 11 == 0 ? 0.0 : 1.0);
    const double d = direction_degrees(gx, gy);
    CHECK(d >= 0.0);
    CHECK(d <= 180.0);
    const auto m1 = gradient_magnitude(RealImage(1, 1, std::vector<double>{gx}), RealImage(1, 1, std::vector<double>{gy}));
    const auto m2 = gradient_magnitude(RealImage(1, 1, std::vector<double>{-gx}), RealImage(1, 1, std::vector<double>{-gy}));
    CHECK(m1.at(0, 0) == m2.at(0, 0));
  }
}

TEST_CASE("ramp direction is 90 everywhere") {
  const auto ch = compute_gradients(horizontal_ramp(12, 12), GradientMask::sobel);
  for (double v : ch.direction.values()) CHECK(v == 90.0);
}
