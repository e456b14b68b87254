#include "sdfeat/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "sdfeat/classifier.hpp"
#include "sdfeat/encoder.hpp"
#include "sdfeat/error.hpp"
#include "sdfeat/parallel.hpp"
#include "sdfeat/rng.hpp"

namespace sdfeat {
namespace {

std::size_t positive_integer(double value, std::string_view axis) {
  if (!(value >= 1.0) || value != std::floor(value) || value > 1e9) {
    throw ConfigError(std::string(axis) + " needs a positive integer, got " + std::to_string(value));
  }
  return static_cast<std::size_t>(value);
}

int signed_integer(double value, std::string_view axis) {
  if (value != std::floor(value) || std::fabs(value) > 1e6) {
    throw ConfigError(std::string(axis) + " needs an integer, got " + std::to_string(value));
  }
  return static_cast<int>(value);
}

std::uint64_t noise_seed_of(const RunConfig& cfg) {
  return cfg.perturbation ? cfg.perturbation->noise_seed : 0;
}

}  // namespace

double confusion_accuracy(const std::vector<std::vector<std::size_t>>& confusion) {
  std::size_t hits = 0, total = 0;
  for (std::size_t t = 0; t < confusion.size(); ++t) {
    for (std::size_t p = 0; p < confusion[t].size(); ++p) {
      total += confusion[t][p];
      if (t == p) hits += confusion[t][p];
    }
  }
  if (total == 0) throw RangeError("confusion matrix is empty");
  return 100.0 * static_cast<double>(hits) / static_cast<double>(total);
}

double ExperimentReport::mean_accuracy() const {
  if (seeds.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : seeds) sum += s.accuracy;
  return sum / static_cast<double>(seeds.size());
}

double ExperimentReport::min_accuracy() const {
  double m = seeds.empty() ? 0.0 : seeds.front().accuracy;
  for (const auto& s : seeds) m = std::min(m, s.accuracy);
  return m;
}

double ExperimentReport::max_accuracy() const {
  double m = seeds.empty() ? 0.0 : seeds.front().accuracy;
  for (const auto& s : seeds) m = std::max(m, s.accuracy);
  return m;
}

Dataset prepare_dataset(const Dataset& dataset, const RunConfig& config) {
  if (!config.resize_to || dataset.image_size() == *config.resize_to) return dataset;
  Dataset out = dataset;
  for (auto& cls : out.classes) {
    for (auto& v : cls.views) {
      v.image = resize_bilinear(v.image, config.resize_to->width, config.resize_to->height);
    }
  }
  return out;
}

ExperimentReport run_experiment(const Dataset& input, const RunConfig& config,
                                const RunOptions& options) {
  std::optional<Dataset> resized;
  if (config.resize_to && input.image_size() != *config.resize_to) {
    resized = prepare_dataset(input, config);
  }
  const Dataset& dataset = resized ? *resized : input;
  const ImageSize size = dataset.image_size();
  config.encoder.validate_for(size.width, size.height);
  if (config.perturbation) config.perturbation->validate();

  const Split split = split_by_angle(dataset, config.train_interval);
  if (split.train.empty()) throw ConfigError("train split is empty");
  if (split.test.empty()) throw ConfigError("test split is empty");

  ExperimentReport report;
  report.config = config;
  report.train_count = split.train.size();
  report.test_count = split.test.size();
  for (const auto& cls : dataset.classes) report.class_labels.push_back(cls.id);
  const std::size_t class_count = dataset.classes.size();

  auto image_of = [&](const SampleRef& ref) -> const GrayImage& {
    return dataset.classes[ref.class_index].views[ref.view_index].image;
  };

  for (const std::uint64_t seed : config.effective_seeds()) {
    const auto start = std::chrono::steady_clock::now();
    EncoderConfig enc_cfg = config.encoder;
    enc_cfg.seed = seed;
    const Encoder encoder(enc_cfg, size.width, size.height);

    std::vector<std::vector<std::uint8_t>> train_features(split.train.size());
    parallel_for(
        split.train.size(),
        [&](std::size_t i) { train_features[i] = encoder.encode(image_of(split.train[i])).values; },
        options.threads);
    Gallery gallery(encoder.fingerprint());
    for (std::size_t i = 0; i < split.train.size(); ++i) {
      gallery.add(dataset.classes[split.train[i].class_index].id, std::move(train_features[i]));
    }

    std::vector<std::size_t> predicted(split.test.size());
    parallel_for(
        split.test.size(),
        [&](std::size_t i) {
          const GrayImage& original = image_of(split.test[i]);
          const FeatureVector query =
              config.perturbation
                  ? encoder.encode(apply(original, *config.perturbation, mix_seed(seed, i)))
                  : encoder.encode(original);
          const Match m = classify(query, gallery, config.metric);
          predicted[i] = split.train[m.index].class_index;
        },
        options.threads);

    SeedResult result;
    result.seed = seed;
    result.confusion.assign(class_count, std::vector<std::size_t>(class_count, 0));
    for (std::size_t i = 0; i < split.test.size(); ++i) {
      ++result.confusion[split.test[i].class_index][predicted[i]];
    }
    result.accuracy = confusion_accuracy(result.confusion);
    for (std::size_t c = 0; c < class_count; ++c) {
      const auto& row = result.confusion[c];
      const std::size_t total = std::accumulate(row.begin(), row.end(), std::size_t{0});
      result.per_class_accuracy.push_back(
          total == 0 ? 0.0 : 100.0 * static_cast<double>(row[c]) / static_cast<double>(total));
    }
    if (options.timing) {
      result.duration_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    report.seeds.push_back(std::move(result));
  }
  return report;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::window: return "W";
    case SweepAxis::group: return "X";
    case SweepAxis::overlap: return "k";
    case SweepAxis::noise_variance: return "noise_variance";
    case SweepAxis::sp_density: return "sp_density";
    case SweepAxis::speckle_variance: return "speckle_variance";
    case SweepAxis::dx: return "dx";
    case SweepAxis::dy: return "dy";
    case SweepAxis::scale_factor: return "scale_factor";
    case SweepAxis::class_count: return "class_count";
    case SweepAxis::train_interval: return "train_interval";
  }
  return "?";
}

SweepAxis parse_sweep_axis(std::string_view name) {
  for (SweepAxis a : {SweepAxis::window, SweepAxis::group, SweepAxis::overlap,
                      SweepAxis::noise_variance, SweepAxis::sp_density, SweepAxis::speckle_variance,
                      SweepAxis::dx, SweepAxis::dy, SweepAxis::scale_factor, SweepAxis::class_count,
                      SweepAxis::train_interval}) {
    if (name == to_string(a)) return a;
  }
  throw ConfigError("unknown sweep axis '" + std::string(name) + "'");
}

RunConfig apply_axis(const RunConfig& base, SweepAxis axis, double value) {
  RunConfig cfg = base;
  const std::uint64_t noise_seed = noise_seed_of(base);
  const bool base_shift = base.perturbation && base.perturbation->kind == PerturbationKind::translate;
  switch (axis) {
    case SweepAxis::window:
      cfg.encoder.window = positive_integer(value, "W");
      break;
    case SweepAxis::group:
      cfg.encoder.group = positive_integer(value, "X");
      break;
    case SweepAxis::overlap:
      cfg.encoder.overlap = positive_integer(value, "k");
      break;
    case SweepAxis::noise_variance:
      cfg.perturbation = PerturbationSpec::gaussian(value, noise_seed);
      break;
    case SweepAxis::sp_density:
      cfg.perturbation = PerturbationSpec::salt_pepper(value, noise_seed);
      break;
    case SweepAxis::speckle_variance:
      cfg.perturbation = PerturbationSpec::speckle(value, noise_seed);
      break;
    case SweepAxis::dx:
      cfg.perturbation = PerturbationSpec::shift(signed_integer(value, "dx"),
                                                 base_shift ? base.perturbation->dy : 0);
      break;
    case SweepAxis::dy:
      cfg.perturbation = PerturbationSpec::shift(base_shift ? base.perturbation->dx : 0,
                                                 signed_integer(value, "dy"));
      break;
    case SweepAxis::scale_factor:
      cfg.perturbation = PerturbationSpec::zoom(value);
      break;
    case SweepAxis::class_count:
      positive_integer(value, "class_count");
      break;
    case SweepAxis::train_interval:
      cfg.train_interval = static_cast<int>(positive_integer(value, "train_interval"));
      break;
  }
  if (cfg.perturbation) cfg.perturbation->validate();
  cfg.encoder.validate();
  return cfg;
}

std::vector<ExperimentReport> run_sweep(const Dataset& dataset, SweepAxis axis,
                                        const std::vector<std::string>& grid,
                                        const RunConfig& base, const RunOptions& options) {
  std::vector<ExperimentReport> reports;
  for (const auto& token : grid) {
    ExperimentReport report;
    try {
      char* end = nullptr;
      const double value = std::strtod(token.c_str(), &end);
      if (token.empty() || end != token.c_str() + token.size() || !std::isfinite(value)) {
        throw ConfigError("grid value '" + token + "' is not a number");
      }
      const RunConfig cfg = apply_axis(base, axis, value);
      report = axis == SweepAxis::class_count
                   ? run_experiment(dataset.first_classes(static_cast<std::size_t>(value)), cfg, options)
                   : run_experiment(dataset, cfg, options);
    } catch (const Error& e) {
      report = ExperimentReport{};
      report.config = base;
      report.error = e.what();
    }
    report.axis = std::string(to_string(axis));
    report.axis_value = token;
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace sdfeat
