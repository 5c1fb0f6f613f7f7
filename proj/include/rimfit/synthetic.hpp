#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rimfit/detections.hpp"
#include "rimfit/formats.hpp"
#include "rimfit/geometry.hpp"
#include "rimfit/image.hpp"

namespace rimfit {

struct SceneEllipse {
  Ellipsed ellipse;
  double fill = 0.85;    ///< interior intensity
  double stroke = 0.0;   ///< extra intensity of a 3 px band inside the rim; 0 disables it

  friend bool operator==(const SceneEllipse&, const SceneEllipse&) = default;
};

struct SceneSpec {
  std::string image_id = "scene";
  int width = 512;
  int height = 384;
  std::vector<SceneEllipse> ellipses;
  int clutter = 0;          ///< jagged polylines per ellipse, or in total without ellipses
  bool second_rim = false;  ///< draw each ellipse as a bowl with a visible lower body edge
  std::uint64_t seed = 0;
  double background = 0.12;

  friend bool operator==(const SceneSpec&, const SceneSpec&) = default;
};

struct Scene {
  RgbImage image;
  GroundTruth truth;
  SceneDetections detections;
};

/// Renders a scene with 4x4 supersampling. Plate boxes are the padded tight
/// boxes of each rim ellipse (the bowl body of second_rim hangs below);
/// food boxes are the tight boxes of each ellipse's clutter. Throws
/// SpecInfeasible when geometry leaves the canvas margin.
Scene generate_scene(const SceneSpec& spec);

/// Vertical offset of the lower body edge drawn for `e` when second_rim is set.
double second_rim_offset(const Ellipsed& e);

nlohmann::json scene_spec_to_json(const SceneSpec& spec);
SceneSpec scene_spec_from_json(const nlohmann::json& j);

/// Reads {"scenes": [...]} or a bare list of scene specs.
std::vector<SceneSpec> load_scene_specs(const std::filesystem::path& path);
void write_scene_specs(const std::vector<SceneSpec>& specs, const std::filesystem::path& path);

struct CorpusOptions {
  int width = 1024;
  int height = 768;
  int min_rims = 1;
  int max_rims = 2;
  int min_clutter = 3;
  int max_clutter = 6;
  bool alternate_second_rim = true;  ///< every odd scene gets second_rim
  bool clutter_only = false;         ///< no rims at all
};

/// Deterministic random scene specs named scene_000, scene_001, ...
std::vector<SceneSpec> random_scene_specs(std::uint64_t seed, int count,
                                          const CorpusOptions& options = {});

}  // namespace rimfit
