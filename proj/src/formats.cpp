#include "rimfit/formats.hpp"

#include <algorithm>
#include <fstream>

#include "rimfit/errors.hpp"

namespace rimfit {

namespace {

double number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw SchemaViolation(std::string("ellipse field '") + key + "' missing or not a number");
  }
  return j[key].get<double>();
}

void sort_by_id(std::vector<ImageEllipses>& items) {
  std::sort(items.begin(), items.end(),
            [](const ImageEllipses& l, const ImageEllipses& r) { return l.image_id < r.image_id; });
}

}  // namespace

nlohmann::json ellipse_to_json(const Ellipsed& e) {
  return {{"cx", e.cx}, {"cy", e.cy}, {"a", e.a}, {"b", e.b}, {"theta_radians", e.theta}};
}

Ellipsed ellipse_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaViolation("ellipse must be an object");
  const double a = number(j, "a"), b = number(j, "b");
  if (!(a > 0 && b > 0)) throw SchemaViolation("ellipse axes must be positive");
  return Ellipsed::normalized(number(j, "cx"), number(j, "cy"), a, b, number(j, "theta_radians"));
}

nlohmann::json image_ellipses_to_json(const ImageEllipses& item) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : item.ellipses) list.push_back(ellipse_to_json(e));
  return {{"image_id", item.image_id}, {"ellipses", list}};
}

ImageEllipses image_ellipses_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("image_id") || !j["image_id"].is_string() ||
      !j.contains("ellipses") || !j["ellipses"].is_array()) {
    throw SchemaViolation("expected {image_id, ellipses: [...]}");
  }
  ImageEllipses item{j["image_id"].get<std::string>(), {}};
  for (const auto& e : j["ellipses"]) item.ellipses.push_back(ellipse_from_json(e));
  return item;
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json(const nlohmann::json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path.string() + ": cannot write");
  out << doc.dump(2) << '\n';
}

void write_prediction(const Prediction& prediction, const std::filesystem::path& path) {
  write_json(image_ellipses_to_json(prediction), path);
}

Prediction load_prediction(const std::filesystem::path& path) {
  try {
    return image_ellipses_from_json(read_json(path));
  } catch (const SchemaViolation& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<Prediction> load_prediction_dir(const std::filesystem::path& dir) {
  std::vector<Prediction> out;
  if (!std::filesystem::is_directory(dir)) throw ParseError(dir.string() + ": not a directory");
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      out.push_back(load_prediction(entry.path()));
    }
  }
  sort_by_id(out);
  return out;
}

std::vector<GroundTruth> load_ground_truth(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) return load_prediction_dir(path);
  const nlohmann::json doc = read_json(path);
  std::vector<GroundTruth> out;
  try {
    if (doc.is_array()) {
      for (const auto& item : doc) out.push_back(image_ellipses_from_json(item));
    } else {
      out.push_back(image_ellipses_from_json(doc));
    }
  } catch (const SchemaViolation& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  sort_by_id(out);
  return out;
}

void write_ground_truth(const std::vector<GroundTruth>& items, const std::filesystem::path& path) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& item : items) list.push_back(image_ellipses_to_json(item));
  write_json(list, path);
}

}  // namespace rimfit
