#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdfeat/dataset.hpp"
#include "sdfeat/run_config.hpp"

namespace sdfeat {

struct SeedResult {
  std::uint64_t seed = 0;
  double accuracy = 0.0;  ///< percent, derived from `confusion`
  /// confusion[truth][predicted] over class indices.
  std::vector<std::vector<std::size_t>> confusion;
  std::vector<double> per_class_accuracy;
  std::optional<double> duration_ms;

  friend bool operator==(const SeedResult&, const SeedResult&) = default;
};

struct ExperimentReport {
  std::string axis;        ///< sweep axis, empty for a single run
  std::string axis_value;  ///< grid value as written by the user
  RunConfig config;
  std::vector<std::string> class_labels;
  std::size_t train_count = 0;
  std::size_t test_count = 0;
  std::vector<SeedResult> seeds;
  std::string error;  ///< non-empty when this point failed

  double mean_accuracy() const;
  double min_accuracy() const;
  double max_accuracy() const;

  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

/// 100 * trace / total.
double confusion_accuracy(const std::vector<std::vector<std::size_t>>& confusion);

struct RunOptions {
  unsigned threads = 0;  ///< 0 = hardware concurrency
  bool timing = false;   ///< record wall-clock durations (breaks byte-identical output)
};

/// Train on the angle split, optionally perturb the test images, encode,
/// classify and score, once per seed. The dataset must already have the
/// image size the config expects.
ExperimentReport run_experiment(const Dataset& dataset, const RunConfig& config,
                                const RunOptions& options = {});

enum class SweepAxis {
  window,
  group,
  overlap,
  noise_variance,
  sp_density,
  speckle_variance,
  dx,
  dy,
  scale_factor,
  class_count,
  train_interval,
};

std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view name);

/// Applies one grid value to a config; throws ConfigError for values the
/// axis cannot take.
RunConfig apply_axis(const RunConfig& base, SweepAxis axis, double value);

/// One report per grid value. A failing point carries its error and the
/// sweep continues.
std::vector<ExperimentReport> run_sweep(const Dataset& dataset, SweepAxis axis,
                                        const std::vector<std::string>& grid,
                                        const RunConfig& base, const RunOptions& options = {});

/// Resizes every image when the config asks for a size the dataset lacks.
Dataset prepare_dataset(const Dataset& dataset, const RunConfig& config);

}  // namespace sdfeat
