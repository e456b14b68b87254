#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sdfeat/imaging.hpp"

namespace sdfeat {

// Noise works on intensities normalized to [0, 1] and rescales with
// round-half-up, following the usual imnoise parameterization.

/// Adds N(0, variance) per pixel. Samples come from SplitMix64 + Box-Muller.
GrayImage gaussian_noise(const GrayImage& img, double variance, std::uint64_t seed);

/// Replaces each pixel with probability `density` by 0 or 255 (equal odds).
GrayImage salt_pepper(const GrayImage& img, double density, std::uint64_t seed);

/// J = I + n * I with n uniform on [-sqrt(3v), sqrt(3v)].
GrayImage speckle(const GrayImage& img, double variance, std::uint64_t seed);

/// Shifts content by (dx, dy); vacated pixels become 0.
GrayImage translate(const GrayImage& img, int dx, int dy);

/// Bilinear zoom about the image center, cropped or zero-padded back to the
/// original size.
GrayImage scale(const GrayImage& img, double factor);

enum class PerturbationKind { gaussian, salt_pepper, speckle, translate, scale };

std::string_view to_string(PerturbationKind kind);
PerturbationKind parse_perturbation_kind(std::string_view name);

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::gaussian;
  double amount = 0.0;  ///< variance, density or scale factor
  int dx = 0;
  int dy = 0;
  std::uint64_t noise_seed = 0;

  static PerturbationSpec gaussian(double variance, std::uint64_t seed = 0) {
    return {PerturbationKind::gaussian, variance, 0, 0, seed};
  }
  static PerturbationSpec salt_pepper(double density, std::uint64_t seed = 0) {
    return {PerturbationKind::salt_pepper, density, 0, 0, seed};
  }
  static PerturbationSpec speckle(double variance, std::uint64_t seed = 0) {
    return {PerturbationKind::speckle, variance, 0, 0, seed};
  }
  static PerturbationSpec shift(int dx, int dy) { return {PerturbationKind::translate, 0.0, dx, dy, 0}; }
  static PerturbationSpec zoom(double factor) { return {PerturbationKind::scale, factor, 0, 0, 0}; }

  /// Throws RangeError when the parameter is out of its domain.
  void validate() const;

  /// "kind=param" form used on the command line, e.g. "gaussian=0.01",
  /// "translate=2,0", "scale=1.2". Unknown kinds or bad numbers throw ConfigError.
  static PerturbationSpec parse(std::string_view text, std::uint64_t noise_seed = 0);
  std::string describe() const;

  friend bool operator==(const PerturbationSpec&, const PerturbationSpec&) = default;
};

/// Applies the spec; `stream` selects an independent noise stream (e.g. per
/// test image) on top of the perturbation's noise seed.
GrayImage apply(const GrayImage& img, const PerturbationSpec& spec, std::uint64_t stream = 0);

}  // namespace sdfeat
