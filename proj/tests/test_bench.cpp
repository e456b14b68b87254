#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "sdfeat/classifier.hpp"
#include "sdfeat/dataset.hpp"
#include "sdfeat/error.hpp"
#include "sdfeat/experiment.hpp"
#include "sdfeat/image_io.hpp"
#include "sdfeat/report.hpp"
#include "sdfeat/synthetic.hpp"

using namespace sdfeat;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunConfig small_run() {
  RunConfig cfg;
  cfg.resize_to = ImageSize{32, 32};
  cfg.seeds = {1, 2, 3};
  return cfg;
}

}  // namespace

TEST_CASE("load_dataset reads flat COIL names") {
  TempDir dir("sdfeat_flat_ds");
  for (int angle = 0; angle < 360; angle += 5) {
    write_png(GrayImage(8, 8, static_cast<std::uint8_t>(angle / 5)),
              dir.path / ("obj1__" + std::to_string(angle) + ".png"));
  }
  write_png(GrayImage(8, 8), dir.path / "objA_x.png");
  std::ofstream(dir.path / "notes.txt") << "ignored";

  const auto ds = load_dataset(dir.path);
  REQUIRE(ds.classes.size() == 1);
  CHECK(ds.classes[0].id == "obj1");
  CHECK(ds.classes[0].views.size() == 72);
  CHECK(ds.classes[0].views[1].angle == 5);
  CHECK(ds.classes[0].views[1].image.at(0, 0) == 1);
  REQUIRE(ds.warnings.size() == 1);
  CHECK(ds.warnings[0].find("objA_x.png") != std::string::npos);
}

TEST_CASE("load_dataset reads class folders, natural order and resize") {
  TempDir dir("sdfeat_folder_ds");
  for (const std::string cls : {"obj10", "obj2"}) {
    fs::create_directories(dir.path / cls);
    for (int angle : {0, 45, 90}) {
      write_png(GrayImage(10, 6, 50), dir.path / cls / (cls + "__" + std::to_string(angle) + ".png"));
    }
  }
  write_png(GrayImage(10, 6), dir.path / "obj2" / "stray.png");

  const auto ds = load_dataset(dir.path, ImageSize{16, 16});
  REQUIRE(ds.classes.size() == 2);
  CHECK(ds.classes[0].id == "obj2");
  CHECK(ds.classes[1].id == "obj10");
  CHECK(ds.image_size() == ImageSize{16, 16});
  CHECK(ds.warnings.size() == 1);
}

TEST_CASE("load_dataset generic labeled folders and size checks") {
  TempDir dir("sdfeat_generic_ds");
  fs::create_directories(dir.path / "cat");
  write_png(GrayImage(4, 4, 1), dir.path / "cat" / "a.png");
  write_png(GrayImage(4, 4, 2), dir.path / "cat" / "b.png");
  const auto ds = load_dataset(dir.path);
  REQUIRE(ds.classes.size() == 1);
  CHECK_FALSE(ds.classes[0].views[0].angle.has_value());
  const auto split = split_by_angle(ds, 45);
  CHECK(split.train.size() + split.test.size() == 2);

  write_png(GrayImage(5, 4, 2), dir.path / "cat" / "c.png");
  CHECK_THROWS_AS(load_dataset(dir.path), DatasetError);
  CHECK_NOTHROW(load_dataset(dir.path, ImageSize{4, 4}));
}

TEST_CASE("load_dataset rejects empty roots") {
  TempDir dir("sdfeat_empty_ds");
  CHECK_THROWS_AS(load_dataset(dir.path), DatasetError);
  CHECK_THROWS_AS(load_dataset(dir.path / "missing"), DatasetError);
}

TEST_CASE("split_by_angle") {
  const auto ds = make_two_class_halves(72, 4, 1);
  const auto s45 = split_by_angle(ds, 45);
  CHECK(s45.train.size() == 16);
  CHECK(s45.test.size() == 128);
  const auto s5 = split_by_angle(ds, 5);
  CHECK(s5.train.size() == 144);
  CHECK(s5.test.empty());
  const auto s90 = split_by_angle(ds, 90);
  CHECK(s90.train.size() == 8);
  CHECK(s90.test.size() == 136);
  CHECK_THROWS_AS(split_by_angle(ds, 7), ConfigError);
  CHECK_THROWS_AS(split_by_angle(ds, 0), ConfigError);

  for (int interval : {5, 10, 15, 30, 45, 60, 90, 120, 180, 360}) {
    const auto s = split_by_angle(ds, interval);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& r : s.train) seen.insert({r.class_index, r.view_index});
    for (const auto& r : s.test) CHECK(seen.insert({r.class_index, r.view_index}).second);
    CHECK(seen.size() == ds.view_count());
  }
}

TEST_CASE("natural ordering") {
  CHECK(natural_less("obj2", "obj10"));
  CHECK_FALSE(natural_less("obj10", "obj2"));
  CHECK(natural_less("a", "b"));
  CHECK(natural_less("obj2", "obj02x"));
}

TEST_CASE("run_experiment separates two spatial layouts") {
  const auto ds = make_two_class_halves(72, 32, 5);
  for (MetricKind m : {MetricKind::cityblock, MetricKind::squared_euclidean, MetricKind::shepard}) {
    auto cfg = small_run();
    cfg.encoder.channels = {Channel::pix};
    cfg.metric = m;
    const auto report = run_experiment(ds, cfg);
    REQUIRE(report.seeds.size() == 3);
    for (const auto& s : report.seeds) {
      CHECK(s.accuracy == 100.0);
      CHECK(s.accuracy == confusion_accuracy(s.confusion));
    }
    CHECK(report.train_count == 16);
    CHECK(report.test_count == 128);
  }
}

TEST_CASE("identity perturbation leaves accuracy unchanged") {
  const auto ds = make_rotating_objects(4, 32, 9);
  auto cfg = small_run();
  const auto base = run_experiment(ds, cfg);
  for (const auto& spec : {PerturbationSpec::gaussian(0.0, 4), PerturbationSpec::shift(0, 0),
                           PerturbationSpec::zoom(1.0), PerturbationSpec::salt_pepper(0.0, 2)}) {
    cfg.perturbation = spec;
    const auto perturbed = run_experiment(ds, cfg);
    for (std::size_t i = 0; i < base.seeds.size(); ++i) {
      CHECK(perturbed.seeds[i].confusion == base.seeds[i].confusion);
    }
  }
}

TEST_CASE("training images classify as themselves under cityblock") {
  const auto ds = make_rotating_objects(5, 32, 3);
  EncoderConfig cfg;
  const Encoder enc(cfg, 32, 32);
  Gallery gallery(enc.fingerprint());
  std::vector<std::string> truth;
  std::vector<FeatureVector> features;
  for (const auto& cls : ds.classes) {
    for (std::size_t v = 0; v < cls.views.size(); v += 9) {
      features.push_back(enc.encode(cls.views[v].image));
      gallery.add(cls.id, features.back());
      truth.push_back(cls.id);
    }
  }
  std::vector<std::string> predicted;
  for (const auto& f : features) predicted.push_back(classify(f, gallery, MetricKind::cityblock).label);
  CHECK(accuracy(predicted, truth) == 100.0);
}

TEST_CASE("run_experiment is deterministic across thread counts") {
  const auto ds = make_rotating_objects(3, 32, 1);
  auto cfg = small_run();
  cfg.perturbation = PerturbationSpec::gaussian(0.02, 11);
  const auto a = run_experiment(ds, cfg, {1, false});
  const auto b = run_experiment(ds, cfg, {4, false});
  CHECK(a == b);
  CHECK(reports_to_csv({a}) == reports_to_csv({b}));
}

TEST_CASE("run_experiment errors") {
  const auto ds = make_two_class_halves(72, 32, 5);
  auto cfg = small_run();
  cfg.train_interval = 5;
  CHECK_THROWS_AS(run_experiment(ds, cfg), ConfigError);
  cfg = small_run();
  cfg.resize_to = ImageSize{30, 30};
  CHECK_THROWS_AS(run_experiment(ds, cfg), ConfigError);
}

TEST_CASE("run_sweep over W") {
  const auto ds = make_rotating_objects(3, 32, 2);
  auto cfg = small_run();
  cfg.seeds = {1};
  const auto reports = run_sweep(ds, SweepAxis::window, {"2", "4", "8", "16"}, cfg);
  REQUIRE(reports.size() == 4);
  for (const auto& r : reports) {
    CHECK(r.error.empty());
    CHECK(r.axis == "W");
  }
  CHECK(reports[0].config.encoder.window == 2);
  CHECK(reports[3].config.encoder.window == 16);
}

TEST_CASE("run_sweep keeps going past a bad point") {
  const auto ds = make_rotating_objects(2, 32, 2);
  auto cfg = small_run();
  cfg.seeds = {1};
  const auto reports = run_sweep(ds, SweepAxis::group, {"4", "3", "x", "8"}, cfg);
  REQUIRE(reports.size() == 4);
  CHECK(reports[0].error.empty());
  CHECK_FALSE(reports[1].error.empty());
  CHECK_FALSE(reports[2].error.empty());
  CHECK(reports[3].error.empty());
  const auto csv = reports_to_csv(reports);
  CHECK(csv.find("does not divide") != std::string::npos);
}

TEST_CASE("noise sweep degrades gracefully on separable data") {
  const auto ds = make_two_class_halves(72, 32, 8);
  auto cfg = small_run();
  cfg.encoder.channels = {Channel::pix};
  const auto reports = run_sweep(ds, SweepAxis::noise_variance, {"0", "0.01"}, cfg);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].mean_accuracy() >= reports[1].mean_accuracy() - 2.0);
}

TEST_CASE("class_count and train_interval axes") {
  const auto ds = make_rotating_objects(4, 32, 6);
  auto cfg = small_run();
  cfg.seeds = {1};
  const auto by_class = run_sweep(ds, SweepAxis::class_count, {"2", "4", "5"}, cfg);
  CHECK(by_class[0].class_labels.size() == 2);
  CHECK(by_class[1].class_labels.size() == 4);
  CHECK_FALSE(by_class[2].error.empty());
  const auto by_interval = run_sweep(ds, SweepAxis::train_interval, {"90", "45"}, cfg);
  CHECK(by_interval[0].train_count == 16);
  CHECK(by_interval[1].train_count == 32);
}

TEST_CASE("apply_axis") {
  RunConfig base;
  base.perturbation = PerturbationSpec::shift(3, 0);
  CHECK(apply_axis(base, SweepAxis::dy, 2).perturbation->dx == 3);
  CHECK(apply_axis(base, SweepAxis::dy, 2).perturbation->dy == 2);
  CHECK(apply_axis(base, SweepAxis::scale_factor, 0.8).perturbation->amount == 0.8);
  CHECK(apply_axis(base, SweepAxis::overlap, 3).encoder.overlap == 3);
  CHECK_THROWS_AS(apply_axis(base, SweepAxis::window, 2.5), ConfigError);
  CHECK_THROWS_AS(apply_axis(base, SweepAxis::sp_density, 1.5), RangeError);
  CHECK(parse_sweep_axis("speckle_variance") == SweepAxis::speckle_variance);
  CHECK_THROWS_AS(parse_sweep_axis("rotation"), ConfigError);
}

TEST_CASE("emit_report CSV and JSON") {
  TempDir dir("sdfeat_reports");
  const auto ds = make_rotating_objects(2, 32, 4);
  const auto report = run_experiment(ds, small_run());

  emit_report({report}, dir.path / "r.csv", ReportFormat::csv);
  const auto csv = slurp(dir.path / "r.csv");
  std::istringstream lines(csv);
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "axis_value,seed,metric,channels,mask,W,X,k,accuracy_percent,duration_ms,error");
  int rows = 0;
  while (std::getline(lines, row)) ++rows;
  CHECK(rows == 3);
  CHECK(csv.find(",1,shepard,pixmagdir,prewitt,16,4,2,") != std::string::npos);

  emit_report({run_experiment(ds, small_run())}, dir.path / "r2.csv", ReportFormat::csv);
  CHECK(slurp(dir.path / "r2.csv") == csv);

  emit_report({report}, dir.path / "r.json", ReportFormat::json);
  const auto back = reports_from_json(slurp(dir.path / "r.json"));
  REQUIRE(back.size() == 1);
  CHECK(back[0] == report);

  auto timed = report;
  timed.seeds[0].duration_ms = 12.5;
  CHECK(reports_from_json(reports_to_json({timed}))[0] == timed);
  CHECK(reports_to_csv({timed}).find(",12.500,") != std::string::npos);

  CHECK_THROWS_AS(emit_report({}, dir.path / "x.csv", ReportFormat::csv), ConfigError);
  CHECK_THROWS_AS(emit_report({report}, dir.path / "no" / "such" / "dir.csv", ReportFormat::csv), IoError);
  CHECK(format_for("a.json") == ReportFormat::json);
  CHECK(format_for("a.csv") == ReportFormat::csv);
}

TEST_CASE("RunConfig JSON") {
  const auto cfg = RunConfig::from_json(R"({
    "W": 8, "X": 2, "k": 1, "P": 8, "channels": ["pix", "dir"], "gradient_mask": "sobel",
    "seed": 5, "metric": "cityblock", "train_interval_degrees": 90, "resize_to": null,
    "perturbation": {"kind": "translate", "dx": 2, "dy": -1}
  })");
  CHECK(cfg.encoder.window == 8);
  CHECK(cfg.encoder.channels == std::vector<Channel>{Channel::pix, Channel::dir});
  CHECK(cfg.encoder.gradient_mask == GradientMask::sobel);
  CHECK(cfg.metric == MetricKind::cityblock);
  CHECK(cfg.train_interval == 90);
  CHECK_FALSE(cfg.resize_to.has_value());
  CHECK(cfg.perturbation->dx == 2);
  CHECK(cfg.effective_seeds() == std::vector<std::uint64_t>{5, 6, 7});
  CHECK(RunConfig::from_json(cfg.to_json()) == cfg);

  const auto defaults = RunConfig::from_json("{}");
  CHECK(defaults.encoder.window == 16);
  CHECK(defaults.encoder.group == 4);
  CHECK(defaults.encoder.overlap == 2);
  CHECK(defaults.resize_to == ImageSize{128, 128});

  CHECK_THROWS_AS(RunConfig::from_json(R"({"Wx": 3})"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(R"({"W": 1})"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json("[1]"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json("{"), ConfigError);
  CHECK(parse_seed_list("1,2,30") == std::vector<std::uint64_t>{1, 2, 30});
  CHECK_THROWS_AS(parse_seed_list("1,,2"), ConfigError);
}
