// Command-line front end: encode single images, build galleries, and run the
// recognition experiments and parameter sweeps.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sdfeat/classifier.hpp"
#include "sdfeat/dataset.hpp"
#include "sdfeat/encoder.hpp"
#include "sdfeat/error.hpp"
#include "sdfeat/experiment.hpp"
#include "sdfeat/image_io.hpp"
#include "sdfeat/report.hpp"
#include "sdfeat/run_config.hpp"
#include "sdfeat/synthetic.hpp"

namespace fs = std::filesystem;
using namespace sdfeat;

namespace {

RunConfig load_config(const std::string& path) {
  return path.empty() ? RunConfig{} : RunConfig::load(path);
}

Dataset load_for(const std::string& root, const RunConfig& cfg) {
  Dataset ds = load_dataset(root, cfg.resize_to);
  for (const auto& w : ds.warnings) std::cerr << "warning: " << w << '\n';
  std::cerr << "loaded " << ds.classes.size() << " classes, " << ds.view_count() << " images ("
            << ds.image_size().width << "x" << ds.image_size().height << ")\n";
  return ds;
}

GrayImage load_image_for(const std::string& path, const RunConfig& cfg) {
  GrayImage img = read_gray_image(path);
  if (cfg.resize_to) img = resize_bilinear(img, cfg.resize_to->width, cfg.resize_to->height);
  return img;
}

void print_summary(const std::vector<ExperimentReport>& reports) {
  for (const auto& r : reports) {
    if (!r.axis.empty()) std::cout << r.axis << "=" << r.axis_value << ": ";
    if (!r.error.empty()) {
      std::cout << "error: " << r.error << '\n';
      continue;
    }
    std::printf("mean %.2f%% (min %.2f, max %.2f) over %zu seeds, %zu train / %zu test\n",
                r.mean_accuracy(), r.min_accuracy(), r.max_accuracy(), r.seeds.size(), r.train_count,
                r.test_count);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse bit-plane feature encoder and nearest-neighbor recognition bench"};
  app.require_subcommand(1);

  std::string config_path;
  std::string input;
  std::string output;
  std::string report_path;
  std::string perturb;
  std::uint64_t noise_seed = 0;
  std::string seeds;
  std::string axis;
  std::string grid;
  unsigned threads = 0;
  bool timing = false;

  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  };
  auto add_run_options = [&](CLI::App* cmd) {
    cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
    cmd->add_flag("--timing", timing, "record per-seed durations in the report");
  };

  auto* encode_cmd = app.add_subcommand("encode", "encode one image into a feature vector");
  encode_cmd->add_option("image", input, "input image (PNG, PPM, PGM)")->required()->check(CLI::ExistingFile);
  add_config(encode_cmd);
  encode_cmd->add_option("--out", output, "output JSON")->required();

  auto* train_cmd = app.add_subcommand("train", "encode the training split into a gallery file");
  train_cmd->add_option("dataset_root", input, "dataset directory")->required();
  add_config(train_cmd);
  train_cmd->add_option("--gallery", output, "gallery JSON to write")->required();

  auto* classify_cmd = app.add_subcommand("classify", "classify one image against a gallery");
  classify_cmd->add_option("image", input, "input image")->required()->check(CLI::ExistingFile);
  add_config(classify_cmd);
  classify_cmd->add_option("--gallery", output, "gallery JSON")->required()->check(CLI::ExistingFile);

  auto* eval_cmd = app.add_subcommand("eval", "run the train/test recognition experiment");
  eval_cmd->add_option("dataset_root", input, "dataset directory")->required();
  add_config(eval_cmd);
  eval_cmd->add_option("--perturb", perturb, "test-time perturbation, e.g. gaussian=0.01, translate=2,0");
  eval_cmd->add_option("--noise-seed", noise_seed, "seed for stochastic perturbations");
  eval_cmd->add_option("--seeds", seeds, "comma-separated encoder seeds");
  eval_cmd->add_option("--report", report_path, "report file (.csv or .json)")->required();
  add_run_options(eval_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "run one experiment per grid value of an axis");
  sweep_cmd->add_option("dataset_root", input, "dataset directory")->required();
  sweep_cmd->add_option("--axis", axis, "W, X, k, noise_variance, sp_density, speckle_variance, dx, dy, "
                                        "scale_factor, class_count, train_interval")->required();
  sweep_cmd->add_option("--grid", grid, "comma-separated values")->required();
  add_config(sweep_cmd);
  sweep_cmd->add_option("--seeds", seeds, "comma-separated encoder seeds");
  sweep_cmd->add_option("--report", report_path, "report file (.csv or .json)")->required();
  add_run_options(sweep_cmd);

  std::size_t synth_classes = 10;
  std::size_t synth_size = 128;
  std::uint64_t synth_seed = 1;
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic rotating-object dataset");
  synth_cmd->add_option("out_root", output, "output directory")->required();
  synth_cmd->add_option("--classes", synth_classes, "number of objects");
  synth_cmd->add_option("--size", synth_size, "image side in pixels");
  synth_cmd->add_option("--seed", synth_seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*encode_cmd) {
      const RunConfig cfg = load_config(config_path);
      const GrayImage img = load_image_for(input, cfg);
      const Encoder encoder(cfg.encoder, img.width(), img.height());
      const FeatureVector fv = encoder.encode(img);
      nlohmann::ordered_json j;
      j["fingerprint"] = nlohmann::ordered_json::parse(fv.fingerprint.to_json());
      j["layout"] = channels_name(fv.layout);
      j["cells_per_channel"] = fv.cells_per_channel;
      j["values"] = fv.values;
      std::ofstream out(output);
      if (!out) throw IoError("cannot write " + output);
      out << j.dump() << '\n';
      std::cerr << "encoded " << fv.size() << " values\n";
    } else if (*train_cmd) {
      const RunConfig cfg = load_config(config_path);
      const Dataset ds = load_for(input, cfg);
      const ImageSize size = ds.image_size();
      const Encoder encoder(cfg.encoder, size.width, size.height);
      Gallery gallery(encoder.fingerprint());
      for (const auto& ref : split_by_angle(ds, cfg.train_interval).train) {
        const auto& cls = ds.classes[ref.class_index];
        gallery.add(cls.id, encoder.encode(cls.views[ref.view_index].image));
      }
      gallery.save(output);
      std::cerr << "gallery: " << gallery.size() << " entries of length " << gallery.feature_length() << '\n';
    } else if (*classify_cmd) {
      const RunConfig cfg = load_config(config_path);
      const Gallery gallery = Gallery::load(output);
      const GrayImage img = load_image_for(input, cfg);
      const Encoder encoder(cfg.encoder, img.width(), img.height());
      const Match m = classify(encoder.encode(img), gallery, cfg.metric);
      std::cout << m.label << '\t' << m.score << '\n';
    } else if (*eval_cmd) {
      RunConfig cfg = load_config(config_path);
      if (!perturb.empty()) cfg.perturbation = PerturbationSpec::parse(perturb, noise_seed);
      if (!seeds.empty()) cfg.seeds = parse_seed_list(seeds);
      const Dataset ds = load_for(input, cfg);
      const auto report = run_experiment(ds, cfg, {threads, timing});
      emit_report({report}, report_path, format_for(report_path));
      print_summary({report});
    } else if (*sweep_cmd) {
      RunConfig cfg = load_config(config_path);
      if (!seeds.empty()) cfg.seeds = parse_seed_list(seeds);
      const SweepAxis sweep_axis = parse_sweep_axis(axis);
      std::vector<std::string> values;
      for (const auto& v : CLI::detail::split(grid, ',')) values.push_back(CLI::detail::trim_copy(v));
      const Dataset ds = load_for(input, cfg);
      const auto reports = run_sweep(ds, sweep_axis, values, cfg, {threads, timing});
      emit_report(reports, report_path, format_for(report_path));
      print_summary(reports);
    } else if (*synth_cmd) {
      write_dataset(make_rotating_objects(synth_classes, synth_size, synth_seed), output);
      std::cerr << "wrote " << synth_classes << " classes to " << output << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
