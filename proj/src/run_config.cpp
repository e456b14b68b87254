#include "sdfeat/run_config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sdfeat/error.hpp"

namespace sdfeat {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const std::set<std::string> kKnownKeys = {
    "W",      "X",        "k",      "P",          "channels", "gradient_mask", "tie_rule",
    "seed",   "metric",   "train_interval_degrees", "resize_to", "perturbation",  "seeds"};

PerturbationSpec perturbation_from_json(const json& j) {
  PerturbationSpec spec;
  spec.kind = parse_perturbation_kind(j.at("kind").get<std::string>());
  spec.noise_seed = j.value("noise_seed", std::uint64_t{0});
  switch (spec.kind) {
    case PerturbationKind::gaussian:
    case PerturbationKind::speckle:
      spec.amount = j.at("variance").get<double>();
      break;
    case PerturbationKind::salt_pepper:
      spec.amount = j.at("density").get<double>();
      break;
    case PerturbationKind::scale:
      spec.amount = j.at("factor").get<double>();
      break;
    case PerturbationKind::translate:
      spec.dx = j.value("dx", 0);
      spec.dy = j.value("dy", 0);
      break;
  }
  spec.validate();
  return spec;
}

ordered_json perturbation_to_json(const PerturbationSpec& spec) {
  ordered_json j;
  j["kind"] = std::string(to_string(spec.kind));
  switch (spec.kind) {
    case PerturbationKind::gaussian:
    case PerturbationKind::speckle:
      j["variance"] = spec.amount;
      break;
    case PerturbationKind::salt_pepper:
      j["density"] = spec.amount;
      break;
    case PerturbationKind::scale:
      j["factor"] = spec.amount;
      break;
    case PerturbationKind::translate:
      j["dx"] = spec.dx;
      j["dy"] = spec.dy;
      break;
  }
  j["noise_seed"] = spec.noise_seed;
  return j;
}

}  // namespace

std::vector<std::uint64_t> RunConfig::effective_seeds() const {
  if (!seeds.empty()) return seeds;
  return {encoder.seed, encoder.seed + 1, encoder.seed + 2};
}

RunConfig RunConfig::from_json(std::string_view text) {
  RunConfig cfg;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, _] : j.items()) {
      if (!kKnownKeys.contains(key)) throw ConfigError("unknown config key '" + key + "'");
    }
    auto& enc = cfg.encoder;
    enc.window = j.value("W", enc.window);
    enc.group = j.value("X", enc.group);
    enc.overlap = j.value("k", enc.overlap);
    enc.bit_depth = j.value("P", enc.bit_depth);
    enc.seed = j.value("seed", enc.seed);
    if (j.contains("channels")) {
      const auto& ch = j.at("channels");
      std::string spec;
      if (ch.is_string()) {
        spec = ch.get<std::string>();
      } else {
        for (const auto& name : ch) spec += name.get<std::string>() + ",";
      }
      enc.channels = parse_channels(spec);
    }
    if (j.contains("gradient_mask")) enc.gradient_mask = parse_gradient_mask(j.at("gradient_mask").get<std::string>());
    if (j.contains("tie_rule")) enc.tie_rule = parse_tie_rule(j.at("tie_rule").get<std::string>());
    if (j.contains("metric")) cfg.metric = parse_metric(j.at("metric").get<std::string>());
    cfg.train_interval = j.value("train_interval_degrees", cfg.train_interval);
    if (j.contains("resize_to")) {
      const auto& r = j.at("resize_to");
      if (r.is_null()) {
        cfg.resize_to.reset();
      } else {
        if (!r.is_array() || r.size() != 2) throw ConfigError("resize_to must be [width, height] or null");
        cfg.resize_to = ImageSize{r[0].get<std::size_t>(), r[1].get<std::size_t>()};
      }
    }
    if (j.contains("perturbation") && !j.at("perturbation").is_null()) {
      cfg.perturbation = perturbation_from_json(j.at("perturbation"));
    }
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  cfg.encoder.validate();
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

std::string RunConfig::to_json() const {
  ordered_json j;
  j["W"] = encoder.window;
  j["X"] = encoder.group;
  j["k"] = encoder.overlap;
  j["P"] = encoder.bit_depth;
  j["channels"] = channels_name(encoder.channels);
  j["gradient_mask"] = std::string(to_string(encoder.gradient_mask));
  j["tie_rule"] = std::string(to_string(encoder.tie_rule));
  j["seed"] = encoder.seed;
  j["metric"] = std::string(to_string(metric));
  j["train_interval_degrees"] = train_interval;
  j["resize_to"] = resize_to ? ordered_json::array({resize_to->width, resize_to->height}) : ordered_json();
  j["perturbation"] = perturbation ? perturbation_to_json(*perturbation) : ordered_json();
  j["seeds"] = seeds;
  return j.dump(2);
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto token = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
      throw ConfigError("bad seed '" + std::string(token) + "'");
    }
    seeds.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return seeds;
}

}  // namespace sdfeat
