#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rimfit/geometry.hpp"

namespace rimfit {

/// {"cx", "cy", "a", "b", "theta_radians"}
nlohmann::json ellipse_to_json(const Ellipsed& e);
Ellipsed ellipse_from_json(const nlohmann::json& j);

/// A set of ellipses attached to one image; used both for predictions and
/// for ground truth.
struct ImageEllipses {
  std::string image_id;
  std::vector<Ellipsed> ellipses;

  friend bool operator==(const ImageEllipses&, const ImageEllipses&) = default;
};

using GroundTruth = ImageEllipses;
using Prediction = ImageEllipses;

nlohmann::json image_ellipses_to_json(const ImageEllipses& item);
ImageEllipses image_ellipses_from_json(const nlohmann::json& j);

nlohmann::json read_json(const std::filesystem::path& path);
/// Writes `doc` with two-space indent and a trailing newline.
void write_json(const nlohmann::json& doc, const std::filesystem::path& path);

void write_prediction(const Prediction& prediction, const std::filesystem::path& path);
Prediction load_prediction(const std::filesystem::path& path);

/// Loads every *.json prediction in a directory, sorted by image id.
std::vector<Prediction> load_prediction_dir(const std::filesystem::path& dir);

/// Accepts a list document, a single-image document, or a directory of
/// single-image documents. Sorted by image id.
std::vector<GroundTruth> load_ground_truth(const std::filesystem::path& path);

void write_ground_truth(const std::vector<GroundTruth>& items, const std::filesystem::path& path);

}  // namespace rimfit
