#include "sdfeat/classifier.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sdfeat/error.hpp"

namespace sdfeat {
namespace {

constexpr int kGalleryFormatVersion = 1;

void require_same_length(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) {
    throw DimensionError("metric: vector lengths differ (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
  }
}

// exp(-d) for every possible byte difference.
const std::array<double, 256>& exp_table() {
  static const std::array<double, 256> table = [] {
    std::array<double, 256> t{};
    for (int d = 0; d < 256; ++d) t[d] = std::exp(-static_cast<double>(d));
    return t;
  }();
  return table;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(bytes.size() * 2, '0');
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    out[2 * i] = digits[bytes[i] >> 4];
    out[2 * i + 1] = digits[bytes[i] & 0xf];
  }
  return out;
}

std::vector<std::uint8_t> from_hex(std::string_view hex) {
  auto nibble = [](char ch) -> int {
    if (ch >= '0' && ch <= '9') return ch - '0';
    if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
    if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
    throw IoError("gallery: bad hex digit");
  };
  if (hex.size() % 2 != 0) throw IoError("gallery: odd-length feature string");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return out;
}

}  // namespace

std::string_view to_string(MetricKind metric) {
  switch (metric) {
    case MetricKind::cityblock: return "cityblock";
    case MetricKind::squared_euclidean: return "squared_euclidean";
    case MetricKind::shepard: return "shepard";
  }
  return "?";
}

MetricKind parse_metric(std::string_view name) {
  if (name == "cityblock") return MetricKind::cityblock;
  if (name == "squared_euclidean" || name == "euclidean") return MetricKind::squared_euclidean;
  if (name == "shepard") return MetricKind::shepard;
  throw ConfigError("unknown metric '" + std::string(name) + "'");
}

double cityblock(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  require_same_length(a, b);
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<std::uint64_t>(std::abs(a[i] - b[i]));
  return static_cast<double>(acc);
}

double squared_euclidean(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  require_same_length(a, b);
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int d = a[i] - b[i];
    acc += static_cast<std::uint64_t>(d * d);
  }
  return static_cast<double>(acc);
}

double shepard(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  require_same_length(a, b);
  const auto& table = exp_table();
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += table[static_cast<std::size_t>(std::abs(a[i] - b[i]))];
  return acc;
}

double score(MetricKind metric, std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  switch (metric) {
    case MetricKind::cityblock: return cityblock(a, b);
    case MetricKind::squared_euclidean: return squared_euclidean(a, b);
    case MetricKind::shepard: return shepard(a, b);
  }
  return 0.0;
}

void Gallery::add(std::string label, const FeatureVector& features) {
  if (!(features.fingerprint == fingerprint_)) {
    throw IncompatibleFeatures("gallery: feature fingerprint " + features.fingerprint.to_json() +
                               " differs from gallery fingerprint " + fingerprint_.to_json());
  }
  add(std::move(label), features.values);
}

void Gallery::add(std::string label, std::vector<std::uint8_t> features) {
  if (!entries_.empty() && features.size() != feature_length()) {
    throw DimensionError("gallery: feature length " + std::to_string(features.size()) +
                         " differs from " + std::to_string(feature_length()));
  }
  entries_.push_back({std::move(label), std::move(features)});
}

void Gallery::save(const std::filesystem::path& path) const {
  nlohmann::ordered_json j;
  j["format"] = "sdfeat-gallery";
  j["format_version"] = kGalleryFormatVersion;
  j["fingerprint"] = nlohmann::ordered_json::parse(fingerprint_.to_json());
  auto entries = nlohmann::ordered_json::array();
  for (const auto& e : entries_) {
    entries.push_back({{"label", e.label}, {"features", to_hex(e.features)}});
  }
  j["entries"] = std::move(entries);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write gallery " + path.string());
  out << j.dump(1) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

Gallery Gallery::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open gallery " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    if (j.at("format").get<std::string>() != "sdfeat-gallery") throw IoError("not a gallery file");
    const int version = j.at("format_version").get<int>();
    if (version != kGalleryFormatVersion) {
      throw IoError("unsupported gallery format version " + std::to_string(version));
    }
    Gallery g(Fingerprint::from_json(j.at("fingerprint").dump()));
    for (const auto& e : j.at("entries")) {
      g.add(e.at("label").get<std::string>(), from_hex(e.at("features").get<std::string>()));
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed gallery " + path.string() + ": " + e.what());
  }
}

Match nearest(std::span<const std::uint8_t> query, const Gallery& gallery, MetricKind metric) {
  if (gallery.empty()) throw ConfigError("classify: gallery is empty");
  const bool maximize = is_similarity(metric);
  const auto& entries = gallery.entries();
  Match best{entries.front().label, score(metric, query, entries.front().features), 0};
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const double s = score(metric, query, entries[i].features);
    if (maximize ? s > best.score : s < best.score) best = {entries[i].label, s, i};
  }
  return best;
}

Match classify(const FeatureVector& query, const Gallery& gallery, MetricKind metric) {
  if (!(query.fingerprint == gallery.fingerprint())) {
    throw IncompatibleFeatures("classify: query fingerprint " + query.fingerprint.to_json() +
                               " differs from gallery fingerprint " +
                               gallery.fingerprint().to_json());
  }
  return nearest(query.values, gallery, metric);
}

double accuracy(std::span<const std::string> predictions, std::span<const std::string> truths) {
  if (predictions.size() != truths.size()) throw DimensionError("accuracy: length mismatch");
  if (predictions.empty()) throw RangeError("accuracy: no predictions");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) hits += predictions[i] == truths[i];
  return 100.0 * static_cast<double>(hits) / static_cast<double>(predictions.size());
}

}  // namespace sdfeat
