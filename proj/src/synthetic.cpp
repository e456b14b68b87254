#include "sdfeat/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sdfeat/error.hpp"
#include "sdfeat/rng.hpp"

namespace sdfeat {
namespace {

struct Blob {
  double cx, cy;      // offset from the image center, in units of the half size
  double ax, ay;      // semi-axes
  double tilt;        // radians
  double level;       // base intensity
  double stripe;      // texture frequency
  double stripe_amp;
};

double uniform(SplitMix64& rng, double lo, double hi) { return lo + (hi - lo) * rng.next_unit(); }

}  // namespace

Dataset make_two_class_halves(std::size_t views_per_class, std::size_t size, std::uint64_t seed) {
  if (views_per_class == 0 || size < 2) throw ConfigError("make_two_class_halves: empty request");
  Dataset ds;
  SplitMix64 rng(seed);
  for (const auto& [id, left_bright] : {std::pair<std::string, bool>{"left_bright", true}, {"right_bright", false}}) {
    DatasetClass cls{id, {}};
    for (std::size_t v = 0; v < views_per_class; ++v) {
      GrayImage img(size, size);
      for (std::size_t r = 0; r < size; ++r) {
        for (std::size_t c = 0; c < size; ++c) {
          const bool left = c < size / 2;
          const double level = left == left_bright ? 200.0 : 50.0;
          img.at(r, c) = round_to_u8(level + 4.0 * rng.next_gaussian());
        }
      }
      const int angle = static_cast<int>((v * 5) % 360);
      cls.views.push_back({angle, id + "__" + std::to_string(angle), std::move(img)});
    }
    ds.classes.push_back(std::move(cls));
  }
  return ds;
}

Dataset make_rotating_objects(std::size_t classes, std::size_t size, std::uint64_t seed) {
  if (classes == 0 || size < 8) throw ConfigError("make_rotating_objects: empty request");
  Dataset ds;
  const double half = static_cast<double>(size) / 2.0;
  for (std::size_t c = 0; c < classes; ++c) {
    SplitMix64 rng(mix_seed(seed, c));
    std::vector<Blob> blobs(3 + rng.next_u64() % 4);
    for (auto& b : blobs) {
      b = {uniform(rng, -0.35, 0.35), uniform(rng, -0.35, 0.35), uniform(rng, 0.12, 0.45),
           uniform(rng, 0.08, 0.3),   uniform(rng, 0.0, std::numbers::pi),
           uniform(rng, 60.0, 230.0), uniform(rng, 2.0, 14.0),  uniform(rng, 0.0, 40.0)};
    }
    const std::string id = "obj" + std::to_string(c + 1);
    DatasetClass cls{id, {}};
    for (int angle = 0; angle < 360; angle += 5) {
      const double t = angle * std::numbers::pi / 180.0;
      const double ct = std::cos(t), st = std::sin(t);
      GrayImage img(size, size);
      for (std::size_t r = 0; r < size; ++r) {
        for (std::size_t col = 0; col < size; ++col) {
          const double x = (static_cast<double>(col) + 0.5 - half) / half;
          const double y = (static_cast<double>(r) + 0.5 - half) / half;
          // Object frame coordinates.
          const double ox = ct * x + st * y;
          const double oy = -st * x + ct * y;
          double value = 0.0;
          for (const auto& b : blobs) {
            const double dx = ox - b.cx, dy = oy - b.cy;
            const double u = std::cos(b.tilt) * dx + std::sin(b.tilt) * dy;
            const double w = -std::sin(b.tilt) * dx + std::cos(b.tilt) * dy;
            if ((u * u) / (b.ax * b.ax) + (w * w) / (b.ay * b.ay) <= 1.0) {
              value = b.level + b.stripe_amp * std::sin(b.stripe * std::numbers::pi * u);
            }
          }
          img.at(r, col) = round_to_u8(value);
        }
      }
      cls.views.push_back({angle, id + "__" + std::to_string(angle), std::move(img)});
    }
    ds.classes.push_back(std::move(cls));
  }
  return ds;
}

}  // namespace sdfeat
