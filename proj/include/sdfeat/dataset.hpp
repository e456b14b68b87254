#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sdfeat/imaging.hpp"

namespace sdfeat {

struct ImageSize {
  std::size_t width = 0;
  std::size_t height = 0;
  friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

struct View {
  std::optional<int> angle;  ///< degrees; absent for plain labeled folders
  std::string name;          ///< file name, or a synthetic identifier
  GrayImage image;
};

struct DatasetClass {
  std::string id;
  std::vector<View> views;  ///< sorted by angle, then name
};

/// Decoded images grouped by class. Every image has the same size.
struct Dataset {
  std::vector<DatasetClass> classes;
  std::vector<std::string> warnings;  ///< files skipped while loading

  std::size_t view_count() const;
  ImageSize image_size() const;
  /// The first `count` classes (in sorted order); throws when fewer exist.
  Dataset first_classes(std::size_t count) const;
};

/// Loads a view-angle dataset. Accepted layouts:
///   <root>/<class>/<name>__<angle>.<ext>   class folders
///   <root>/obj<ID>__<angle>.<ext>          flat COIL-100 naming
///   <root>/<class>/<any>.<ext>             class folders without angles
/// Unparsable names are skipped with a warning; an empty result throws
/// DatasetError. With `resize_to`, every image is resampled to that size.
Dataset load_dataset(const std::filesystem::path& root,
                     std::optional<ImageSize> resize_to = std::nullopt);

/// Writes `<root>/<class>/<class>__<angle>.png` (or the view name when no angle).
void write_dataset(const Dataset& dataset, const std::filesystem::path& root);

/// Class ids compare with embedded numbers ordered numerically (obj2 < obj10).
bool natural_less(const std::string& a, const std::string& b);

struct SampleRef {
  std::size_t class_index = 0;
  std::size_t view_index = 0;
};

struct Split {
  std::vector<SampleRef> train;
  std::vector<SampleRef> test;
};

/// Views with angle % interval == 0 train, the rest test. Views without an
/// angle use a stable hash of their name in place of the angle.
Split split_by_angle(const Dataset& dataset, int interval_degrees);

}  // namespace sdfeat
