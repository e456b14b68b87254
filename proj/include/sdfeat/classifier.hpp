#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdfeat/encoder.hpp"

namespace sdfeat {

enum class MetricKind {
  cityblock,          ///< sum |a - b|, minimized
  squared_euclidean,  ///< sum (a - b)^2, minimized (no square root)
  shepard,            ///< sum exp(-|a - b|), maximized
};

std::string_view to_string(MetricKind metric);
MetricKind parse_metric(std::string_view name);

/// True when larger scores mean closer matches.
constexpr bool is_similarity(MetricKind metric) { return metric == MetricKind::shepard; }

double cityblock(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
double squared_euclidean(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
double shepard(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
double score(MetricKind metric, std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

struct GalleryEntry {
  std::string label;
  std::vector<std::uint8_t> features;
};

/// Labeled training features, all encoded under one fingerprint.
class Gallery {
 public:
  explicit Gallery(Fingerprint fingerprint) : fingerprint_(std::move(fingerprint)) {}

  /// Throws IncompatibleFeatures on fingerprint mismatch, DimensionError on length mismatch.
  void add(std::string label, const FeatureVector& features);
  void add(std::string label, std::vector<std::uint8_t> features);

  const Fingerprint& fingerprint() const { return fingerprint_; }
  const std::vector<GalleryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t feature_length() const { return entries_.empty() ? 0 : entries_.front().features.size(); }

  void save(const std::filesystem::path& path) const;
  static Gallery load(const std::filesystem::path& path);

 private:
  Fingerprint fingerprint_;
  std::vector<GalleryEntry> entries_;
};

struct Match {
  std::string label;
  double score = 0.0;
  std::size_t index = 0;  ///< gallery position of the winner
};

/// 1-nearest neighbor. Ties go to the lowest gallery index.
Match classify(const FeatureVector& query, const Gallery& gallery, MetricKind metric);

/// Same, without the fingerprint check; the caller guarantees comparability.
Match nearest(std::span<const std::uint8_t> query, const Gallery& gallery, MetricKind metric);

/// 100 * matches / total.
double accuracy(std::span<const std::string> predictions, std::span<const std::string> truths);

}  // namespace sdfeat
