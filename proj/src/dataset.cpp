#include "sdfeat/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>

#include "sdfeat/error.hpp"
#include "sdfeat/image_io.hpp"

namespace fs = std::filesystem;

namespace sdfeat {
namespace {

std::optional<int> parse_nonnegative(std::string_view text) {
  if (text.empty()) return std::nullopt;
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || v < 0) return std::nullopt;
  return v;
}

// "<name>__<angle>" -> angle
std::optional<int> angle_from_stem(std::string_view stem) {
  const auto sep = stem.rfind("__");
  if (sep == std::string_view::npos) return std::nullopt;
  return parse_nonnegative(stem.substr(sep + 2));
}

struct FlatName {
  std::string class_id;
  int angle;
};

// "obj<ID>__<angle>"
std::optional<FlatName> parse_flat_name(std::string_view stem) {
  if (stem.substr(0, 3) != "obj") return std::nullopt;
  const auto sep = stem.find("__");
  if (sep == std::string_view::npos) return std::nullopt;
  const auto id = parse_nonnegative(stem.substr(3, sep - 3));
  const auto angle = parse_nonnegative(stem.substr(sep + 2));
  if (!id || !angle) return std::nullopt;
  return FlatName{"obj" + std::to_string(*id), *angle};
}

std::vector<fs::path> sorted_entries(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) out.push_back(entry.path());
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
    return natural_less(a.filename().string(), b.filename().string());
  });
  return out;
}

bool is_hidden(const fs::path& p) {
  const auto name = p.filename().string();
  return !name.empty() && name.front() == '.';
}

class Loader {
 public:
  explicit Loader(std::optional<ImageSize> resize_to) : resize_to_(resize_to) {}

  void add(const std::string& class_id, std::optional<int> angle, const fs::path& file) {
    GrayImage img;
    try {
      img = read_gray_image(file);
    } catch (const Error& e) {
      warn("skipping undecodable image " + file.string() + ": " + e.what());
      return;
    }
    if (resize_to_) img = resize_bilinear(img, resize_to_->width, resize_to_->height);
    if (angle) *angle %= 360;
    auto& views = classes_[class_id];
    if (angle && std::any_of(views.begin(), views.end(), [&](const View& v) { return v.angle == angle; })) {
      warn("skipping " + file.string() + ": duplicate angle " + std::to_string(*angle) +
           " in class " + class_id);
      return;
    }
    views.push_back({angle, file.filename().string(), std::move(img)});
  }

  void warn(std::string message) { warnings_.push_back(std::move(message)); }

  Dataset finish(const fs::path& root) {
    Dataset ds;
    ds.warnings = std::move(warnings_);
    std::vector<std::string> ids;
    for (const auto& [id, views] : classes_) {
      if (!views.empty()) ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end(), natural_less);
    for (const auto& id : ids) {
      auto views = std::move(classes_[id]);
      std::sort(views.begin(), views.end(), [](const View& a, const View& b) {
        if (a.angle != b.angle) return a.angle < b.angle;
        return natural_less(a.name, b.name);
      });
      ds.classes.push_back({id, std::move(views)});
    }
    if (ds.classes.empty()) throw DatasetError("no usable images under " + root.string());

    const ImageSize size = ds.image_size();
    for (const auto& cls : ds.classes) {
      for (const auto& v : cls.views) {
        if (v.image.width() != size.width || v.image.height() != size.height) {
          throw DatasetError("image " + cls.id + "/" + v.name + " is " +
                             std::to_string(v.image.width()) + "x" + std::to_string(v.image.height()) +
                             ", expected " + std::to_string(size.width) + "x" +
                             std::to_string(size.height) + "; set resize_to");
        }
      }
    }
    return ds;
  }

 private:
  std::optional<ImageSize> resize_to_;
  std::map<std::string, std::vector<View>> classes_;
  std::vector<std::string> warnings_;
};

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i]));
    const bool db = std::isdigit(static_cast<unsigned char>(b[j]));
    if (da && db) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      std::string_view na(a.data() + i, ie - i), nb(b.data() + j, je - j);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if (a.size() - i != b.size() - j) return a.size() - i < b.size() - j;
  return a < b;
}

std::size_t Dataset::view_count() const {
  std::size_t n = 0;
  for (const auto& c : classes) n += c.views.size();
  return n;
}

ImageSize Dataset::image_size() const {
  for (const auto& c : classes) {
    if (!c.views.empty()) return {c.views.front().image.width(), c.views.front().image.height()};
  }
  return {};
}

Dataset Dataset::first_classes(std::size_t count) const {
  if (count == 0 || count > classes.size()) {
    throw ConfigError("class count " + std::to_string(count) + " outside [1, " +
                      std::to_string(classes.size()) + "]");
  }
  Dataset out;
  out.classes.assign(classes.begin(), classes.begin() + static_cast<std::ptrdiff_t>(count));
  return out;
}

Dataset load_dataset(const fs::path& root, std::optional<ImageSize> resize_to) {
  if (!fs::is_directory(root)) throw DatasetError("dataset root is not a directory: " + root.string());
  Loader loader(resize_to);

  for (const auto& entry : sorted_entries(root)) {
    if (is_hidden(entry)) continue;
    if (fs::is_directory(entry)) {
      const std::string class_id = entry.filename().string();
      std::vector<fs::path> files;
      for (const auto& f : sorted_entries(entry)) {
        if (!is_hidden(f) && fs::is_regular_file(f) && is_supported_image(f)) files.push_back(f);
      }
      const bool has_angles = std::any_of(files.begin(), files.end(), [](const fs::path& f) {
        return angle_from_stem(f.stem().string()).has_value();
      });
      for (const auto& f : files) {
        const auto angle = angle_from_stem(f.stem().string());
        if (has_angles && !angle) {
          loader.warn("skipping " + f.string() + ": no __<angle> suffix");
          continue;
        }
        loader.add(class_id, angle, f);
      }
    } else if (fs::is_regular_file(entry) && is_supported_image(entry)) {
      const auto parsed = parse_flat_name(entry.stem().string());
      if (!parsed) {
        loader.warn("skipping " + entry.string() + ": expected obj<ID>__<angle>");
        continue;
      }
      loader.add(parsed->class_id, parsed->angle, entry);
    }
  }
  return loader.finish(root);
}

void write_dataset(const Dataset& dataset, const fs::path& root) {
  for (const auto& cls : dataset.classes) {
    const fs::path dir = root / cls.id;
    fs::create_directories(dir);
    for (const auto& v : cls.views) {
      const std::string name = v.angle ? cls.id + "__" + std::to_string(*v.angle) + ".png"
                                       : fs::path(v.name).replace_extension(".png").string();
      write_png(v.image, dir / name);
    }
  }
}

Split split_by_angle(const Dataset& dataset, int interval_degrees) {
  if (interval_degrees <= 0 || 360 % interval_degrees != 0) {
    throw ConfigError("train interval " + std::to_string(interval_degrees) +
                      " must be a positive divisor of 360");
  }
  Split split;
  for (std::size_t c = 0; c < dataset.classes.size(); ++c) {
    const auto& views = dataset.classes[c].views;
    for (std::size_t v = 0; v < views.size(); ++v) {
      // Angle-less views get a pseudo angle on a 5-degree grid.
      const int angle = views[v].angle ? *views[v].angle
                                       : static_cast<int>(fnv1a(views[v].name) % 72) * 5;
      auto& bucket = angle % interval_degrees == 0 ? split.train : split.test;
      bucket.push_back({c, v});
    }
  }
  return split;
}

}  // namespace sdfeat
