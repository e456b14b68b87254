#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdfeat/classifier.hpp"
#include "sdfeat/dataset.hpp"
#include "sdfeat/encoder.hpp"
#include "sdfeat/perturbation.hpp"

namespace sdfeat {

/// Everything an experiment needs besides the data.
struct RunConfig {
  EncoderConfig encoder;
  MetricKind metric = MetricKind::shepard;
  int train_interval = 45;
  std::optional<ImageSize> resize_to = ImageSize{128, 128};
  std::optional<PerturbationSpec> perturbation;
  /// Empty means {seed, seed + 1, seed + 2}.
  std::vector<std::uint64_t> seeds;

  std::vector<std::uint64_t> effective_seeds() const;

  /// JSON with the encoder fields (W, X, k, P, channels, gradient_mask,
  /// tie_rule, seed) plus metric, train_interval_degrees, resize_to,
  /// perturbation and seeds. Missing keys keep their defaults; unknown keys
  /// throw ConfigError.
  static RunConfig from_json(std::string_view text);
  static RunConfig load(const std::filesystem::path& path);
  std::string to_json() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses "1,2,3" into seeds.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

}  // namespace sdfeat
