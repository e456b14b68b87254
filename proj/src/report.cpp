#include "sdfeat/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sdfeat/error.hpp"

namespace sdfeat {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

}  // namespace

ReportFormat format_for(const std::filesystem::path& path) {
  return path.extension() == ".json" ? ReportFormat::json : ReportFormat::csv;
}

std::string reports_to_csv(const std::vector<ExperimentReport>& reports) {
  std::ostringstream os;
  os << "axis_value,seed,metric,channels,mask,W,X,k,accuracy_percent,duration_ms,error\n";
  for (const auto& r : reports) {
    const auto& enc = r.config.encoder;
    const std::string common = std::string(to_string(r.config.metric)) + "," +
                               channels_name(enc.channels) + "," +
                               std::string(to_string(enc.gradient_mask)) + "," +
                               std::to_string(enc.window) + "," + std::to_string(enc.group) + "," +
                               std::to_string(enc.overlap);
    if (!r.error.empty() || r.seeds.empty()) {
      os << csv_field(r.axis_value) << ",," << common << ",,," << csv_field(r.error) << '\n';
      continue;
    }
    for (const auto& s : r.seeds) {
      os << csv_field(r.axis_value) << ',' << s.seed << ',' << common << ',' << fixed(s.accuracy, 4)
         << ',' << (s.duration_ms ? fixed(*s.duration_ms, 3) : std::string()) << ",\n";
    }
  }
  return os.str();
}

std::string reports_to_json(const std::vector<ExperimentReport>& reports) {
  auto arr = ordered_json::array();
  for (const auto& r : reports) {
    const auto& enc = r.config.encoder;
    ordered_json j;
    j["axis"] = r.axis;
    j["axis_value"] = r.axis_value;
    j["metric"] = std::string(to_string(r.config.metric));
    j["channels"] = channels_name(enc.channels);
    j["mask"] = std::string(to_string(enc.gradient_mask));
    j["W"] = enc.window;
    j["X"] = enc.group;
    j["k"] = enc.overlap;
    j["mean_accuracy_percent"] = r.mean_accuracy();
    j["config"] = ordered_json::parse(r.config.to_json());
    j["class_labels"] = r.class_labels;
    j["train_count"] = r.train_count;
    j["test_count"] = r.test_count;
    auto seeds = ordered_json::array();
    for (const auto& s : r.seeds) {
      ordered_json sj;
      sj["seed"] = s.seed;
      sj["accuracy_percent"] = s.accuracy;
      sj["duration_ms"] = s.duration_ms ? ordered_json(*s.duration_ms) : ordered_json();
      sj["per_class_accuracy"] = s.per_class_accuracy;
      sj["confusion"] = s.confusion;
      seeds.push_back(std::move(sj));
    }
    j["seeds"] = std::move(seeds);
    j["error"] = r.error;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::vector<ExperimentReport> reports_from_json(std::string_view text) {
  std::vector<ExperimentReport> out;
  try {
    const json arr = json::parse(text);
    for (const auto& j : arr) {
      ExperimentReport r;
      r.axis = j.at("axis").get<std::string>();
      r.axis_value = j.at("axis_value").get<std::string>();
      r.config = RunConfig::from_json(j.at("config").dump());
      r.class_labels = j.at("class_labels").get<std::vector<std::string>>();
      r.train_count = j.at("train_count").get<std::size_t>();
      r.test_count = j.at("test_count").get<std::size_t>();
      for (const auto& sj : j.at("seeds")) {
        SeedResult s;
        s.seed = sj.at("seed").get<std::uint64_t>();
        s.accuracy = sj.at("accuracy_percent").get<double>();
        if (!sj.at("duration_ms").is_null()) s.duration_ms = sj.at("duration_ms").get<double>();
        s.per_class_accuracy = sj.at("per_class_accuracy").get<std::vector<double>>();
        s.confusion = sj.at("confusion").get<std::vector<std::vector<std::size_t>>>();
        r.seeds.push_back(std::move(s));
      }
      r.error = j.at("error").get<std::string>();
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed report JSON: ") + e.what());
  }
  return out;
}

void emit_report(const std::vector<ExperimentReport>& reports, const std::filesystem::path& path,
                 ReportFormat format) {
  if (reports.empty()) throw ConfigError("emit_report: no reports");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report " + path.string());
  out << (format == ReportFormat::json ? reports_to_json(reports) : reports_to_csv(reports));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace sdfeat
