#include "sdfeat/encoder.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>

#include <json.hpp>

#include "sdfeat/error.hpp"
#include "sdfeat/rng.hpp"

namespace sdfeat {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Channel channel) {
  switch (channel) {
    case Channel::pix: return "pix";
    case Channel::mag: return "mag";
    case Channel::dir: return "dir";
  }
  return "?";
}

Channel parse_channel(std::string_view name) {
  if (name == "pix") return Channel::pix;
  if (name == "mag") return Channel::mag;
  if (name == "dir") return Channel::dir;
  throw ConfigError("unknown channel '" + std::string(name) + "'");
}

std::vector<Channel> parse_channels(std::string_view spec) {
  bool seen[3] = {false, false, false};
  std::size_t pos = 0;
  while (pos < spec.size()) {
    if (spec[pos] == ',' || spec[pos] == '+' || spec[pos] == ' ') {
      ++pos;
      continue;
    }
    if (pos + 3 > spec.size()) throw ConfigError("bad channel list '" + std::string(spec) + "'");
    seen[static_cast<int>(parse_channel(spec.substr(pos, 3)))] = true;
    pos += 3;
  }
  std::vector<Channel> out;
  for (Channel c : {Channel::pix, Channel::mag, Channel::dir}) {
    if (seen[static_cast<int>(c)]) out.push_back(c);
  }
  if (out.empty()) throw ConfigError("channel list is empty");
  return out;
}

std::string channels_name(std::span<const Channel> channels) {
  std::string name;
  for (Channel c : channels) name += to_string(c);
  return name;
}

std::string_view to_string(TieRule rule) { return rule == TieRule::all ? "all" : "first"; }

TieRule parse_tie_rule(std::string_view name) {
  if (name == "all") return TieRule::all;
  if (name == "first") return TieRule::first;
  throw ConfigError("unknown tie rule '" + std::string(name) + "'");
}

void EncoderConfig::validate() const {
  if (window < 2) throw ConfigError("window size W must be >= 2");
  if (group < 2) throw ConfigError("group size X must be >= 2");
  if (overlap < 1) throw ConfigError("overlap k must be >= 1");
  if (bit_depth < 1 || bit_depth > 8) throw ConfigError("bit depth P must be in [1, 8]");
  if (channels.empty()) throw ConfigError("at least one channel is required");
  for (std::size_t i = 1; i < channels.size(); ++i) {
    if (channels[i] <= channels[i - 1]) {
      throw ConfigError("channels must be distinct and in pix, mag, dir order");
    }
  }
}

std::size_t EncoderConfig::cells_per_channel(std::size_t width, std::size_t height) const {
  return overlap * width * height / window;
}

void EncoderConfig::validate_for(std::size_t width, std::size_t height) const {
  validate();
  const std::size_t pixels = width * height;
  if (pixels == 0) throw ConfigError("image has no pixels");
  if (pixels % window != 0) {
    throw ConfigError("window size W=" + std::to_string(window) + " does not divide m*n=" +
                      std::to_string(pixels));
  }
  const std::size_t cells = cells_per_channel(width, height);
  if (cells % group != 0) {
    throw ConfigError("group size X=" + std::to_string(group) + " does not divide C=" +
                      std::to_string(cells));
  }
  if ((has(Channel::mag) || has(Channel::dir)) && (width < 3 || height < 3)) {
    throw ConfigError("gradient channels need images of at least 3x3");
  }
}

bool EncoderConfig::has(Channel channel) const {
  return std::find(channels.begin(), channels.end(), channel) != channels.end();
}

std::uint64_t channel_seed(std::uint64_t seed, Channel channel) {
  return seed + static_cast<std::uint64_t>(channel) * 1'000'000ULL;
}

Fingerprint Fingerprint::of(const EncoderConfig& config, std::size_t width, std::size_t height) {
  Fingerprint f;
  f.window = config.window;
  f.group = config.group;
  f.overlap = config.overlap;
  f.bit_depth = config.bit_depth;
  f.channels = config.channels;
  f.gradient_mask = config.gradient_mask;
  f.seed = config.seed;
  f.height = height;
  f.width = width;
  f.tie_rule = config.tie_rule;
  return f;
}

std::string Fingerprint::to_json() const {
  ordered_json j;
  j["W"] = window;
  j["X"] = group;
  j["k"] = overlap;
  j["P"] = bit_depth;
  auto names = ordered_json::array();
  for (Channel c : channels) names.push_back(std::string(sdfeat::to_string(c)));
  j["channels"] = names;
  j["gradient_mask"] = std::string(sdfeat::to_string(gradient_mask));
  j["seed"] = seed;
  j["m"] = height;
  j["n"] = width;
  j["tie_rule"] = std::string(sdfeat::to_string(tie_rule));
  j["version"] = version;
  return j.dump();
}

Fingerprint Fingerprint::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Fingerprint f;
    f.window = j.at("W").get<std::size_t>();
    f.group = j.at("X").get<std::size_t>();
    f.overlap = j.at("k").get<std::size_t>();
    f.bit_depth = j.at("P").get<int>();
    for (const auto& name : j.at("channels")) f.channels.push_back(parse_channel(name.get<std::string>()));
    f.gradient_mask = parse_gradient_mask(j.at("gradient_mask").get<std::string>());
    f.seed = j.at("seed").get<std::uint64_t>();
    f.height = j.at("m").get<std::size_t>();
    f.width = j.at("n").get<std::size_t>();
    f.tie_rule = parse_tie_rule(j.at("tie_rule").get<std::string>());
    f.version = j.at("version").get<int>();
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed fingerprint: ") + e.what());
  }
}

SelectionSchedule build_schedule(std::size_t height, std::size_t width, std::size_t window,
                                 std::size_t overlap, std::uint64_t seed) {
  const std::size_t pixels = height * width;
  if (window == 0 || pixels == 0 || pixels % window != 0) {
    throw ConfigError("build_schedule: W=" + std::to_string(window) + " does not divide m*n=" +
                      std::to_string(pixels));
  }
  if (overlap < 1) throw ConfigError("build_schedule: overlap k must be >= 1");
  if (pixels > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError("build_schedule: image too large");
  }

  SelectionSchedule s;
  s.seed_ = seed;
  s.height_ = height;
  s.width_ = width;
  s.window_ = window;
  s.overlap_ = overlap;
  s.indices_.resize(overlap * pixels);

  for (std::size_t round = 0; round < overlap; ++round) {
    auto perm = std::span<std::uint32_t>(s.indices_).subspan(round * pixels, pixels);
    std::iota(perm.begin(), perm.end(), 0u);
    SplitMix64 rng(seed + round);
    for (std::size_t i = pixels - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.next_u64() % (i + 1));
      std::swap(perm[i], perm[j]);
    }
  }
  return s;
}

SelectionSchedule SelectionSchedule::from_cells(std::size_t height, std::size_t width,
                                                std::size_t window,
                                                std::vector<std::uint32_t> indices) {
  if (window == 0 || indices.size() % window != 0) {
    throw DimensionError("from_cells: index count is not a multiple of the window");
  }
  for (std::uint32_t idx : indices) {
    if (idx >= height * width) throw RangeError("from_cells: index " + std::to_string(idx) + " outside image");
  }
  SelectionSchedule s;
  s.height_ = height;
  s.width_ = width;
  s.window_ = window;
  s.overlap_ = height * width == 0 ? 0 : indices.size() / (height * width);
  s.indices_ = std::move(indices);
  return s;
}

std::vector<std::uint32_t> cell_sums(std::span<const std::uint8_t> plane,
                                     const SelectionSchedule& schedule) {
  if (plane.size() != schedule.width() * schedule.height()) {
    throw DimensionError("cell_sums: plane size does not match schedule");
  }
  const std::size_t cells = schedule.cell_count();
  std::vector<std::uint32_t> sums(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    std::uint32_t acc = 0;
    for (std::uint32_t idx : schedule.cell(c)) acc += plane[idx];
    sums[c] = acc;
  }
  return sums;
}

std::vector<std::uint8_t> winner_take_all(std::span<const std::uint32_t> sums, std::size_t group,
                                          TieRule rule) {
  if (group == 0 || sums.size() % group != 0) {
    throw ConfigError("winner_take_all: group size " + std::to_string(group) +
                      " does not divide length " + std::to_string(sums.size()));
  }
  std::vector<std::uint8_t> out(sums.size(), 0);
  for (std::size_t start = 0; start < sums.size(); start += group) {
    const auto g = sums.subspan(start, group);
    const auto top = std::max_element(g.begin(), g.end());  // first maximum
    if (rule == TieRule::first) {
      out[start + static_cast<std::size_t>(top - g.begin())] = 1;
      continue;
    }
    for (std::size_t i = 0; i < group; ++i) out[start + i] = g[i] == *top ? 1 : 0;
  }
  return out;
}

std::vector<std::uint8_t> fuse_planes(std::span<const std::vector<std::uint8_t>> plane_bits) {
  if (plane_bits.empty()) return {};
  if (plane_bits.size() > 8) throw ConfigError("fuse_planes: at most 8 planes fit a byte");
  const std::size_t len = plane_bits.front().size();
  std::vector<std::uint8_t> fused(len, 0);
  for (std::size_t p = 0; p < plane_bits.size(); ++p) {
    if (plane_bits[p].size() != len) throw DimensionError("fuse_planes: plane lengths differ");
    for (std::size_t c = 0; c < len; ++c) {
      fused[c] = static_cast<std::uint8_t>(fused[c] | ((plane_bits[p][c] & 1u) << p));
    }
  }
  return fused;
}

std::vector<std::uint8_t> encode_channel(const GrayImage& img, const EncoderConfig& config,
                                         const SelectionSchedule& schedule) {
  if (img.width() != schedule.width() || img.height() != schedule.height()) {
    throw DimensionError("encode_channel: image does not match schedule dimensions");
  }
  if (schedule.window() != config.window) {
    throw ConfigError("encode_channel: schedule window differs from config");
  }
  const BitPlaneStack stack = bit_planes(img, config.bit_depth);
  std::vector<std::vector<std::uint8_t>> winners;
  winners.reserve(stack.depth());
  for (const auto& plane : stack.planes) {
    winners.push_back(winner_take_all(cell_sums(plane, schedule), config.group, config.tie_rule));
  }
  return fuse_planes(winners);
}

const SelectionSchedule& ChannelSchedules::for_channel(Channel channel) const {
  switch (channel) {
    case Channel::pix: return pix;
    case Channel::mag: return mag;
    case Channel::dir: return dir;
  }
  return pix;
}

ChannelSchedules build_channel_schedules(const EncoderConfig& config, std::size_t width,
                                         std::size_t height) {
  config.validate_for(width, height);
  ChannelSchedules out;
  auto make = [&](Channel c) {
    return build_schedule(height, width, config.window, config.overlap,
                          channel_seed(config.seed, c));
  };
  if (config.has(Channel::pix)) out.pix = make(Channel::pix);
  if (config.has(Channel::mag)) out.mag = make(Channel::mag);
  if (config.has(Channel::dir)) out.dir = make(Channel::dir);
  return out;
}

FeatureVector encode(const GrayImage& img, const EncoderConfig& config,
                     const ChannelSchedules& schedules) {
  config.validate_for(img.width(), img.height());
  FeatureVector fv;
  fv.layout = config.channels;
  fv.cells_per_channel = config.cells_per_channel(img.width(), img.height());
  fv.fingerprint = Fingerprint::of(config, img.width(), img.height());
  fv.values.reserve(fv.cells_per_channel * config.channels.size());

  std::optional<GradientChannels> gradients;
  if (config.has(Channel::mag) || config.has(Channel::dir)) {
    gradients = compute_gradients(img, config.gradient_mask);
  }
  for (Channel c : config.channels) {
    GrayImage source;
    if (c == Channel::pix) {
      source = img;
    } else if (c == Channel::mag) {
      source = quantize(gradients->magnitude, QuantizeMode::minmax_0_255);
    } else {
      source = quantize(gradients->direction, QuantizeMode::direction_degrees);
    }
    const auto part = encode_channel(source, config, schedules.for_channel(c));
    fv.values.insert(fv.values.end(), part.begin(), part.end());
  }
  return fv;
}

Encoder::Encoder(EncoderConfig config, std::size_t width, std::size_t height)
    : config_(std::move(config)),
      width_(width),
      height_(height),
      schedules_(build_channel_schedules(config_, width, height)),
      fingerprint_(Fingerprint::of(config_, width, height)) {}

FeatureVector Encoder::encode(const GrayImage& img) const {
  if (img.width() != width_ || img.height() != height_) {
    throw DimensionError("Encoder: image is " + std::to_string(img.width()) + "x" +
                         std::to_string(img.height()) + ", encoder built for " +
                         std::to_string(width_) + "x" + std::to_string(height_));
  }
  return sdfeat::encode(img, config_, schedules_);
}

}  // namespace sdfeat
