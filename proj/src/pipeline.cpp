#include "rimfit/pipeline.hpp"

#include "rimfit/errors.hpp"

namespace rimfit {

std::vector<Contour> filter_rims(const std::vector<Contour>& contours, const SceneDetections& scene,
                                 const HyperParams& hp) {
  std::vector<Contour> out = contours;
  for (const auto& food : scene.foods) {
    const BoundingBox* plate = nearest_box(food.center(), scene.plates);
    if (plate == nullptr) break;
    try {
      out = filter_rim(out, RimContext{food, *plate}, hp);
    } catch (const NoGap&) {
      // this pair has no band below the food
    }
  }
  return out;
}

std::vector<CandidateEllipse> run_pipeline(const GrayImage& image,
                                           const std::optional<SceneDetections>& detections,
                                           const Config& config, StageTrace* trace) {
  const HyperParams& hp = config.hp;
  StageTrace local;
  StageTrace& t = trace ? *trace : local;

  if (detections) t.merged = merge_food_boxes(*detections, hp.g_m, config.strict_containment);

  t.edges = canny_quantile(image, config.canny.sigma, config.canny.low_quantile,
                           config.canny.high_quantile);
  t.traced = trace_contours(t.edges);

  t.extracted.clear();
  for (const auto& raw : t.traced) {
    auto pieces = extract_curved(raw, hp);
    for (auto& piece : pieces) t.extracted.push_back(std::move(piece));
  }
  t.curved = filter_straight(t.extracted, hp, config.squared_chord);
  t.rims = detections ? filter_rims(t.curved, t.merged, hp) : t.curved;
  t.grouped = group_contours(t.rims, hp);
  t.fitted = fit_candidates(t.grouped);

  if (!detections) {
    t.plate_filtered = t.fitted;
    t.food_filtered = t.fitted;
    return t.fitted;
  }
  t.plate_filtered = filter_by_plate_box(t.fitted, t.merged.plates, hp);
  t.food_filtered = filter_by_food_distance(t.plate_filtered, t.merged.foods, hp,
                                            config.squared_food_distance);
  return t.food_filtered;
}

}  // namespace rimfit
