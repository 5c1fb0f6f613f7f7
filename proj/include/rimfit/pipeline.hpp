#pragma once

#include <optional>
#include <vector>

#include "rimfit/config.hpp"
#include "rimfit/contours.hpp"
#include "rimfit/detections.hpp"
#include "rimfit/edges.hpp"
#include "rimfit/ellipse_filter.hpp"
#include "rimfit/image.hpp"

namespace rimfit {

/// Intermediate products of every stage, for debugging and tests.
struct StageTrace {
  SceneDetections merged;
  EdgeMap edges;
  std::vector<RawContour> traced;
  std::vector<Contour> extracted;
  std::vector<Contour> curved;   ///< after the straight-chord filter
  std::vector<Contour> rims;     ///< after rim disambiguation
  std::vector<Contour> grouped;
  std::vector<CandidateEllipse> fitted;
  std::vector<CandidateEllipse> plate_filtered;
  std::vector<CandidateEllipse> food_filtered;
};

/// Full detection run on one image:
/// merge food boxes, Canny, trace, curvature gate, chord filter, rim
/// filter, grouping, hull fit, plate-box filter, food-distance filter.
/// Without detections the semantic stages are skipped.
std::vector<CandidateEllipse> run_pipeline(const GrayImage& image,
                                           const std::optional<SceneDetections>& detections,
                                           const Config& config, StageTrace* trace = nullptr);

/// Rim filtering for every merged food box against its nearest container.
std::vector<Contour> filter_rims(const std::vector<Contour>& contours, const SceneDetections& scene,
                                 const HyperParams& hp);

}  // namespace rimfit
