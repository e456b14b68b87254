#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdfeat/gradient.hpp"
#include "sdfeat/imaging.hpp"

namespace sdfeat {

enum class Channel { pix, mag, dir };

std::string_view to_string(Channel channel);
Channel parse_channel(std::string_view name);

/// Parses "pixmagdir", "pix,mag", "magdir", ... into canonical pix, mag, dir order.
std::vector<Channel> parse_channels(std::string_view spec);
std::string channels_name(std::span<const Channel> channels);

/// How winner-take-all treats several cells sharing the group maximum.
enum class TieRule {
  all,    ///< every maximal cell wins
  first,  ///< only the first maximal cell wins
};

std::string_view to_string(TieRule rule);
TieRule parse_tie_rule(std::string_view name);

struct EncoderConfig {
  std::size_t window = 16;  ///< pixels summed per cell (W)
  std::size_t group = 4;    ///< cells per winner-take-all group (X)
  std::size_t overlap = 2;  ///< how many cells each pixel feeds (k)
  int bit_depth = 8;        ///< P
  std::vector<Channel> channels{Channel::pix, Channel::mag, Channel::dir};
  GradientMask gradient_mask = GradientMask::prewitt;
  TieRule tie_rule = TieRule::all;
  std::uint64_t seed = 1;

  /// Checks the parameters alone; throws ConfigError.
  void validate() const;
  /// Also checks W | m*n and X | C for a concrete image size.
  void validate_for(std::size_t width, std::size_t height) const;
  /// k * m * n / W for the given image size.
  std::size_t cells_per_channel(std::size_t width, std::size_t height) const;

  bool has(Channel channel) const;

  friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

/// Seed used for a channel's schedule: seed + {0, 1e6, 2e6} for pix, mag, dir.
std::uint64_t channel_seed(std::uint64_t seed, Channel channel);

/// Everything that must agree for two feature vectors to be comparable.
struct Fingerprint {
  static constexpr int kVersion = 1;

  std::size_t window = 0;
  std::size_t group = 0;
  std::size_t overlap = 0;
  int bit_depth = 0;
  std::vector<Channel> channels;
  GradientMask gradient_mask = GradientMask::prewitt;
  std::uint64_t seed = 0;
  std::size_t height = 0;  ///< m
  std::size_t width = 0;   ///< n
  TieRule tie_rule = TieRule::all;
  int version = kVersion;

  static Fingerprint of(const EncoderConfig& config, std::size_t width, std::size_t height);

  /// JSON object with keys W, X, k, P, channels, gradient_mask, seed, m, n, tie_rule, version.
  std::string to_json() const;
  static Fingerprint from_json(std::string_view text);

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

/// Deterministic cell -> pixel-index assignment. Cells are stored flat,
/// `window` indices each; round r occupies cells [r*m*n/W, (r+1)*m*n/W).
class SelectionSchedule {
 public:
  SelectionSchedule() = default;

  /// Explicit cells, flat, `window` indices each. Throws RangeError for an
  /// index outside the image and DimensionError for a ragged list.
  static SelectionSchedule from_cells(std::size_t height, std::size_t width, std::size_t window,
                                      std::vector<std::uint32_t> indices);

  std::uint64_t seed() const { return seed_; }
  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t window() const { return window_; }
  std::size_t overlap() const { return overlap_; }
  std::size_t cell_count() const { return window_ == 0 ? 0 : indices_.size() / window_; }

  std::span<const std::uint32_t> cell(std::size_t c) const {
    return std::span<const std::uint32_t>(indices_).subspan(c * window_, window_);
  }
  std::span<const std::uint32_t> indices() const { return indices_; }

  friend bool operator==(const SelectionSchedule&, const SelectionSchedule&) = default;

 private:
  friend SelectionSchedule build_schedule(std::size_t, std::size_t, std::size_t, std::size_t,
                                          std::uint64_t);
  std::uint64_t seed_ = 0;
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::size_t window_ = 0;
  std::size_t overlap_ = 0;
  std::vector<std::uint32_t> indices_;
};

/// k rounds of Fisher-Yates over [0, m*n) (j = next_u64 mod (i+1), i from
/// m*n-1 down to 1), SplitMix64 seeded with seed + round, each round chopped
/// into consecutive W-sized cells.
SelectionSchedule build_schedule(std::size_t height, std::size_t width, std::size_t window,
                                 std::size_t overlap, std::uint64_t seed);

/// B(c): number of set bits of `plane` at the indices of cell c.
std::vector<std::uint32_t> cell_sums(std::span<const std::uint8_t> plane,
                                     const SelectionSchedule& schedule);

/// Splits B into consecutive groups of `group` and marks group maxima with 1.
std::vector<std::uint8_t> winner_take_all(std::span<const std::uint32_t> sums, std::size_t group,
                                          TieRule rule = TieRule::all);

/// F*(c) = sum_p 2^p * plane_bits[p][c].
std::vector<std::uint8_t> fuse_planes(std::span<const std::vector<std::uint8_t>> plane_bits);

/// Algorithm body for one raster: bit planes, cell sums, winner-take-all per
/// plane, then fusion. The same schedule serves every plane.
std::vector<std::uint8_t> encode_channel(const GrayImage& img, const EncoderConfig& config,
                                         const SelectionSchedule& schedule);

struct FeatureVector {
  std::vector<std::uint8_t> values;
  std::vector<Channel> layout;
  std::size_t cells_per_channel = 0;
  Fingerprint fingerprint;

  std::size_t size() const { return values.size(); }
};

/// Schedules for pix, mag, dir; entries for absent channels stay empty.
struct ChannelSchedules {
  SelectionSchedule pix;
  SelectionSchedule mag;
  SelectionSchedule dir;

  const SelectionSchedule& for_channel(Channel channel) const;
};

ChannelSchedules build_channel_schedules(const EncoderConfig& config, std::size_t width,
                                         std::size_t height);

FeatureVector encode(const GrayImage& img, const EncoderConfig& config,
                     const ChannelSchedules& schedules);

/// Config plus prebuilt schedules for one image size.
class Encoder {
 public:
  Encoder(EncoderConfig config, std::size_t width, std::size_t height);

  FeatureVector encode(const GrayImage& img) const;

  const EncoderConfig& config() const { return config_; }
  const Fingerprint& fingerprint() const { return fingerprint_; }
  const ChannelSchedules& schedules() const { return schedules_; }
  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }

 private:
  EncoderConfig config_;
  std::size_t width_;
  std::size_t height_;
  ChannelSchedules schedules_;
  Fingerprint fingerprint_;
};

}  // namespace sdfeat
