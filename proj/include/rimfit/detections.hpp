#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rimfit/geometry.hpp"

namespace rimfit {

enum class Label { plate, bowl, food };

std::string_view to_string(Label label);
Label parse_label(std::string_view text);

struct BoundingBox {
  Label label = Label::food;
  double x_min = 0;
  double y_min = 0;
  double x_max = 0;
  double y_max = 0;
  double score = 1;

  Rect<double> rect() const { return {x_min, y_min, x_max, y_max}; }
  Point2d center() const { return rect().center(); }
  double area() const { return rect().area(); }
  bool is_container() const { return label != Label::food; }
  bool is_valid() const {
    return x_min < x_max && y_min < y_max && score >= 0 && score <= 1;
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Detections for one image, partitioned into containers (plate, bowl)
/// and food.
struct SceneDetections {
  std::string image_id;
  std::vector<BoundingBox> plates;
  std::vector<BoundingBox> foods;

  friend bool operator==(const SceneDetections&, const SceneDetections&) = default;
};

inline constexpr double kDefaultDetectorFloor = 0.35;

/// Parses the detection document
///   {"image_id": ..., "detections": [{"label", "score", "box": [x0, y0, x1, y1]}]}
/// dropping boxes scored below `floor`.
SceneDetections parse_detections(const nlohmann::json& doc, double floor = kDefaultDetectorFloor);
SceneDetections load_detections(const std::filesystem::path& path,
                                double floor = kDefaultDetectorFloor);

nlohmann::json detections_to_json(const SceneDetections& scene);
void write_detections(const SceneDetections& scene, const std::filesystem::path& path);

double iou(const BoundingBox& a, const BoundingBox& b);

/// Tight union rectangle; keeps a's label and the larger score.
BoundingBox box_union(const BoundingBox& a, const BoundingBox& b);

/// Repeatedly merges pairs of food boxes that either overlap with
/// IoU >= g_m or sit in the same plate/bowl box, until no pair qualifies.
/// "Sit in" means both centers lie inside the container, or both boxes lie
/// fully inside it when `strict_containment` is set. Food boxes come back
/// sorted by (x_min, y_min, x_max, y_max).
SceneDetections merge_food_boxes(const SceneDetections& scene, double g_m,
                                 bool strict_containment = false);

}  // namespace rimfit
