#include "sdfeat/perturbation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include "sdfeat/error.hpp"
#include "sdfeat/rng.hpp"

namespace sdfeat {
namespace {

void require_variance(double variance, const char* op) {
  if (!(variance >= 0.0) || !std::isfinite(variance)) {
    throw RangeError(std::string(op) + ": variance must be finite and >= 0");
  }
}

double parse_number(std::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ConfigError("not a number: '" + s + "'");
  }
  return v;
}

int parse_int(std::string_view text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("not an integer: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

GrayImage gaussian_noise(const GrayImage& img, double variance, std::uint64_t seed) {
  require_variance(variance, "gaussian_noise");
  const double sigma = std::sqrt(variance);
  SplitMix64 rng(seed);
  GrayImage out(img.width(), img.height());
  auto in = img.pixels();
  auto o = out.pixels();
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double v = in[i] / 255.0 + sigma * rng.next_gaussian();
    o[i] = round_to_u8(std::clamp(v, 0.0, 1.0) * 255.0);
  }
  return out;
}

GrayImage salt_pepper(const GrayImage& img, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) {
    throw RangeError("salt_pepper: density must lie in [0, 1]");
  }
  SplitMix64 rng(seed);
  GrayImage out = img;
  for (auto& px : out.pixels()) {
    const double u = rng.next_unit();
    const std::uint64_t coin = rng.next_u64();
    if (u < density) px = (coin & 1u) ? 255 : 0;
  }
  return out;
}

GrayImage speckle(const GrayImage& img, double variance, std::uint64_t seed) {
  require_variance(variance, "speckle");
  const double half_width = std::sqrt(3.0 * variance);
  SplitMix64 rng(seed);
  GrayImage out(img.width(), img.height());
  auto in = img.pixels();
  auto o = out.pixels();
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double n = (2.0 * rng.next_unit() - 1.0) * half_width;
    const double v = in[i] / 255.0;
    o[i] = round_to_u8(std::clamp(v + n * v, 0.0, 1.0) * 255.0);
  }
  return out;
}

GrayImage translate(const GrayImage& img, int dx, int dy) {
  const auto w = static_cast<long>(img.width());
  const auto h = static_cast<long>(img.height());
  if (std::labs(dx) >= w || std::labs(dy) >= h) {
    throw RangeError("translate: shift (" + std::to_string(dx) + ", " + std::to_string(dy) +
                     ") does not fit a " + std::to_string(w) + "x" + std::to_string(h) + " image");
  }
  GrayImage out(img.width(), img.height(), 0);
  for (long r = 0; r < h; ++r) {
    const long sr = r - dy;
    if (sr < 0 || sr >= h) continue;
    for (long c = 0; c < w; ++c) {
      const long sc = c - dx;
      if (sc < 0 || sc >= w) continue;
      out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) =
          img.at(static_cast<std::size_t>(sr), static_cast<std::size_t>(sc));
    }
  }
  return out;
}

GrayImage scale(const GrayImage& img, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw RangeError("scale: factor must be positive and finite");
  }
  constexpr double kEps = 1e-9;
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  GrayImage out(w, h, 0);
  if (w == 0 || h == 0) return out;
  const double cx = (static_cast<double>(w) - 1.0) / 2.0;
  const double cy = (static_cast<double>(h) - 1.0) / 2.0;
  const double max_x = static_cast<double>(w - 1);
  const double max_y = static_cast<double>(h - 1);

  for (std::size_t r = 0; r < h; ++r) {
    double y = cy + (static_cast<double>(r) - cy) / factor;
    if (y < -kEps || y > max_y + kEps) continue;
    y = std::clamp(y, 0.0, max_y);
    const auto y0 = static_cast<std::size_t>(y);
    const std::size_t y1 = std::min(y0 + 1, h - 1);
    const double fy = y - static_cast<double>(y0);
    for (std::size_t c = 0; c < w; ++c) {
      double x = cx + (static_cast<double>(c) - cx) / factor;
      if (x < -kEps || x > max_x + kEps) continue;
      x = std::clamp(x, 0.0, max_x);
      const auto x0 = static_cast<std::size_t>(x);
      const std::size_t x1 = std::min(x0 + 1, w - 1);
      const double fx = x - static_cast<double>(x0);
      const double top = img.at(y0, x0) * (1.0 - fx) + img.at(y0, x1) * fx;
      const double bottom = img.at(y1, x0) * (1.0 - fx) + img.at(y1, x1) * fx;
      out.at(r, c) = round_to_u8(top * (1.0 - fy) + bottom * fy);
    }
  }
  return out;
}

std::string_view to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::gaussian: return "gaussian";
    case PerturbationKind::salt_pepper: return "salt_pepper";
    case PerturbationKind::speckle: return "speckle";
    case PerturbationKind::translate: return "translate";
    case PerturbationKind::scale: return "scale";
  }
  return "?";
}

PerturbationKind parse_perturbation_kind(std::string_view name) {
  if (name == "gaussian") return PerturbationKind::gaussian;
  if (name == "salt_pepper" || name == "sp") return PerturbationKind::salt_pepper;
  if (name == "speckle") return PerturbationKind::speckle;
  if (name == "translate" || name == "shift") return PerturbationKind::translate;
  if (name == "scale") return PerturbationKind::scale;
  throw ConfigError("unknown perturbation kind '" + std::string(name) + "'");
}

void PerturbationSpec::validate() const {
  switch (kind) {
    case PerturbationKind::gaussian:
    case PerturbationKind::speckle:
      require_variance(amount, to_string(kind).data());
      break;
    case PerturbationKind::salt_pepper:
      if (!(amount >= 0.0 && amount <= 1.0)) throw RangeError("salt_pepper: density must lie in [0, 1]");
      break;
    case PerturbationKind::scale:
      if (!(amount > 0.0) || !std::isfinite(amount)) throw RangeError("scale: factor must be positive");
      break;
    case PerturbationKind::translate:
      break;
  }
}

PerturbationSpec PerturbationSpec::parse(std::string_view text, std::uint64_t noise_seed) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ConfigError("perturbation must be kind=param: '" + std::string(text) + "'");
  PerturbationSpec spec;
  spec.kind = parse_perturbation_kind(text.substr(0, eq));
  spec.noise_seed = noise_seed;
  const std::string_view param = text.substr(eq + 1);
  if (spec.kind == PerturbationKind::translate) {
    const auto comma = param.find(',');
    spec.dx = parse_int(param.substr(0, comma));
    spec.dy = comma == std::string_view::npos ? 0 : parse_int(param.substr(comma + 1));
  } else {
    spec.amount = parse_number(param);
  }
  spec.validate();
  return spec;
}

std::string PerturbationSpec::describe() const {
  std::ostringstream os;
  os << to_string(kind) << '=';
  if (kind == PerturbationKind::translate) {
    os << dx << ',' << dy;
  } else {
    os << amount;
  }
  return os.str();
}

GrayImage apply(const GrayImage& img, const PerturbationSpec& spec, std::uint64_t stream) {
  const std::uint64_t seed = mix_seed(spec.noise_seed, stream);
  switch (spec.kind) {
    case PerturbationKind::gaussian: return gaussian_noise(img, spec.amount, seed);
    case PerturbationKind::salt_pepper: return salt_pepper(img, spec.amount, seed);
    case PerturbationKind::speckle: return speckle(img, spec.amount, seed);
    case PerturbationKind::translate: return translate(img, spec.dx, spec.dy);
    case PerturbationKind::scale: return scale(img, spec.amount);
  }
  return img;
}

}  // namespace sdfeat
