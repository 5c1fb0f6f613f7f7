#pragma once

#include <vector>

#include "rimfit/contours.hpp"
#include "rimfit/detections.hpp"
#include "rimfit/geometry.hpp"

namespace rimfit {

struct CandidateEllipse {
  Ellipsed ellipse;
  std::size_t source_contour_size = 0;
  double score = 0;  ///< mean squared residual of the source points

  friend bool operator==(const CandidateEllipse&, const CandidateEllipse&) = default;
};

/// Hull-then-fit for each contour. Contours whose hull cannot carry an
/// ellipse are skipped.
std::vector<CandidateEllipse> fit_candidates(const std::vector<Contour>& contours);

/// Fraction of the ellipse area (360-gon approximation) outside `box`.
double area_fraction_outside(const Ellipsed& e, const Rect<double>& box);

/// Box whose center is nearest to `point`; nullptr for an empty list.
const BoundingBox* nearest_box(const Point2d& point, const std::vector<BoundingBox>& boxes);

/// Removes candidates with at least a_p of their area outside the nearest
/// plate/bowl box. No plates means no filtering.
std::vector<CandidateEllipse> filter_by_plate_box(const std::vector<CandidateEllipse>& candidates,
                                                  const std::vector<BoundingBox>& plates,
                                                  const HyperParams& hp);

/// Removes candidates whose center is at least d_f from every food box
/// center (squared distance when `squared`). No foods means no filtering.
std::vector<CandidateEllipse> filter_by_food_distance(
    const std::vector<CandidateEllipse>& candidates, const std::vector<BoundingBox>& foods,
    const HyperParams& hp, bool squared = false);

}  // namespace rimfit
