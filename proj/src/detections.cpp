#include "rimfit/detections.hpp"

#include <algorithm>
#include <fstream>
#include <tuple>

#include "rimfit/errors.hpp"

namespace rimfit {

std::string_view to_string(Label label) {
  switch (label) {
    case Label::plate:
      return "plate";
    case Label::bowl:
      return "bowl";
    case Label::food:
      return "food";
  }
  return "food";
}

Label parse_label(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "plate") return Label::plate;
  if (lower == "bowl") return Label::bowl;
  if (lower == "food") return Label::food;
  throw SchemaViolation("unknown label '" + std::string(text) + "'");
}

SceneDetections parse_detections(const nlohmann::json& doc, double floor) {
  if (!doc.is_object()) throw SchemaViolation("detection document must be an object");
  SceneDetections scene;
  if (!doc.contains("image_id") || !doc["image_id"].is_string()) {
    throw SchemaViolation("missing string field 'image_id'");
  }
  scene.image_id = doc["image_id"].get<std::string>();
  if (!doc.contains("detections") || !doc["detections"].is_array()) {
    throw SchemaViolation("missing array field 'detections'");
  }

  std::size_t index = 0;
  for (const auto& item : doc["detections"]) {
    const std::string where = "detection " + std::to_string(index++) + ": ";
    if (!item.is_object() || !item.contains("label") || !item.contains("box")) {
      throw SchemaViolation(where + "needs 'label' and 'box'");
    }
    const auto& box = item["box"];
    if (!item["label"].is_string() || !box.is_array() || box.size() != 4) {
      throw SchemaViolation(where + "'box' must be [x_min, y_min, x_max, y_max]");
    }
    for (const auto& v : box) {
      if (!v.is_number()) throw SchemaViolation(where + "box coordinates must be numbers");
    }
    BoundingBox b;
    b.label = parse_label(item["label"].get<std::string>());
    b.x_min = box[0].get<double>();
    b.y_min = box[1].get<double>();
    b.x_max = box[2].get<double>();
    b.y_max = box[3].get<double>();
    if (item.contains("score")) {
      if (!item["score"].is_number()) throw SchemaViolation(where + "'score' must be a number");
      b.score = item["score"].get<double>();
    }
    if (!(b.x_min < b.x_max) || !(b.y_min < b.y_max)) throw SchemaViolation(where + "inverted box");
    if (!(b.score >= 0 && b.score <= 1)) throw SchemaViolation(where + "score outside [0, 1]");
    if (b.score < floor) continue;
    (b.is_container() ? scene.plates : scene.foods).push_back(b);
  }
  return scene;
}

SceneDetections load_detections(const std::filesystem::path& path, double floor) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    return parse_detections(doc, floor);
  } catch (const SchemaViolation& e) {
    throw SchemaViolation(path.string() + ": " + e.what());
  }
}

nlohmann::json detections_to_json(const SceneDetections& scene) {
  nlohmann::json list = nlohmann::json::array();
  const auto emit = [&](const BoundingBox& b) {
    list.push_back({{"label", to_string(b.label)},
                    {"score", b.score},
                    {"box", {b.x_min, b.y_min, b.x_max, b.y_max}}});
  };
  for (const auto& b : scene.plates) emit(b);
  for (const auto& b : scene.foods) emit(b);
  return {{"image_id", scene.image_id}, {"detections", list}};
}

void write_detections(const SceneDetections& scene, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path.string() + ": cannot write");
  out << detections_to_json(scene).dump(2) << '\n';
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (w <= 0 || h <= 0) return 0;
  const double inter = w * h;
  return inter / (a.area() + b.area() - inter);
}

BoundingBox box_union(const BoundingBox& a, const BoundingBox& b) {
  return {a.label,
          std::min(a.x_min, b.x_min),
          std::min(a.y_min, b.y_min),
          std::max(a.x_max, b.x_max),
          std::max(a.y_max, b.y_max),
          std::max(a.score, b.score)};
}

namespace {

bool inside(const BoundingBox& inner, const BoundingBox& outer) {
  return inner.x_min >= outer.x_min && inner.y_min >= outer.y_min &&
         inner.x_max <= outer.x_max && inner.y_max <= outer.y_max;
}

bool share_container(const BoundingBox& a, const BoundingBox& b,
                     const std::vector<BoundingBox>& plates, bool strict) {
  for (const auto& plate : plates) {
    if (strict) {
      if (inside(a, plate) && inside(b, plate)) return true;
    } else if (plate.rect().contains(a.center()) && plate.rect().contains(b.center())) {
      return true;
    }
  }
  return false;
}

void sort_boxes(std::vector<BoundingBox>& boxes) {
  std::sort(boxes.begin(), boxes.end(), [](const BoundingBox& l, const BoundingBox& r) {
    return std::tie(l.x_min, l.y_min, l.x_max, l.y_max, l.score) <
           std::tie(r.x_min, r.y_min, r.x_max, r.y_max, r.score);
  });
}

}  // namespace

SceneDetections merge_food_boxes(const SceneDetections& scene, double g_m,
                                 bool strict_containment) {
  SceneDetections out = scene;
  auto& foods = out.foods;
  sort_boxes(foods);
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < foods.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < foods.size() && !merged; ++j) {
        if (iou(foods[i], foods[j]) >= g_m ||
            share_container(foods[i], foods[j], scene.plates, strict_containment)) {
          foods[i] = box_union(foods[i], foods[j]);
          foods.erase(foods.begin() + static_cast<std::ptrdiff_t>(j));
          sort_boxes(foods);
          merged = true;
        }
      }
    }
  }
  return out;
}

}  // namespace rimfit
