#pragma once

#include <filesystem>

#include "sdfeat/imaging.hpp"

namespace sdfeat {

/// Reads an 8-bit PNG, PPM (P3/P6) or PGM (P2/P5) file as grayscale.
/// Color input goes through to_grayscale; alpha is dropped.
GrayImage read_gray_image(const std::filesystem::path& path);

void write_pgm(const GrayImage& img, const std::filesystem::path& path);
void write_png(const GrayImage& img, const std::filesystem::path& path);

/// Writes PNG or PGM depending on the extension.
void write_gray_image(const GrayImage& img, const std::filesystem::path& path);

/// True for extensions read_gray_image understands.
bool is_supported_image(const std::filesystem::path& path);

}  // namespace sdfeat
