#include "sdfeat/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "sdfeat/error.hpp"

namespace sdfeat {
namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return ext;
}

GrayImage read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw IoError("cannot read PNG " + path.string() + ": " + image.message);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError("cannot decode PNG " + path.string() + ": " + msg);
  }
  const std::size_t w = image.width;
  const std::size_t h = image.height;
  if (!color) return GrayImage(w, h, std::move(buffer));

  GrayImage r(w, h), g(w, h), b(w, h);
  for (std::size_t i = 0; i < w * h; ++i) {
    r.pixels()[i] = buffer[3 * i];
    g.pixels()[i] = buffer[3 * i + 1];
    b.pixels()[i] = buffer[3 * i + 2];
  }
  return to_grayscale(r, g, b);
}

// Next whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      if (!token.empty()) break;
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
  return token;
}

std::size_t parse_count(std::istream& in, const std::filesystem::path& path) {
  const std::string token = next_token(in);
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw IoError("malformed PNM header in " + path.string());
  }
}

GrayImage read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string magic = next_token(in);
  if (magic != "P2" && magic != "P3" && magic != "P5" && magic != "P6") {
    throw IoError("unsupported PNM magic '" + magic + "' in " + path.string());
  }
  const std::size_t w = parse_count(in, path);
  const std::size_t h = parse_count(in, path);
  const std::size_t maxval = parse_count(in, path);
  if (w == 0 || h == 0 || maxval == 0 || maxval > 255) {
    throw IoError("only 8-bit PNM files are supported: " + path.string());
  }
  const bool color = magic == "P3" || magic == "P6";
  const bool binary = magic == "P5" || magic == "P6";
  const std::size_t samples = w * h * (color ? 3 : 1);

  std::vector<std::uint8_t> raw(samples);
  if (binary) {
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(samples));
    if (static_cast<std::size_t>(in.gcount()) != samples) {
      throw IoError("truncated PNM data in " + path.string());
    }
  } else {
    for (auto& v : raw) v = static_cast<std::uint8_t>(std::min(parse_count(in, path), maxval));
  }
  if (maxval != 255) {
    for (auto& v : raw) v = round_to_u8(v * 255.0 / static_cast<double>(maxval));
  }
  if (!color) return GrayImage(w, h, std::move(raw));

  GrayImage r(w, h), g(w, h), b(w, h);
  for (std::size_t i = 0; i < w * h; ++i) {
    r.pixels()[i] = raw[3 * i];
    g.pixels()[i] = raw[3 * i + 1];
    b.pixels()[i] = raw[3 * i + 2];
  }
  return to_grayscale(r, g, b);
}

}  // namespace

bool is_supported_image(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  return ext == ".png" || ext == ".ppm" || ext == ".pgm" || ext == ".pnm";
}

GrayImage read_gray_image(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") return read_pnm(path);
  throw IoError("unsupported image format: " + path.string());
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  auto px = img.pixels();
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void write_png(const GrayImage& img, const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, img.pixels().data(), 0, nullptr)) {
    throw IoError("cannot write PNG " + path.string() + ": " + image.message);
  }
}

void write_gray_image(const GrayImage& img, const std::filesystem::path& path) {
  if (lower_extension(path) == ".png") {
    write_png(img, path);
  } else {
    write_pgm(img, path);
  }
}

}  // namespace sdfeat
