#include "rimfit/ellipse_filter.hpp"

#include <limits>

#include "rimfit/errors.hpp"

namespace rimfit {

std::vector<CandidateEllipse> fit_candidates(const std::vector<Contour>& contours) {
  std::vector<CandidateEllipse> out;
  for (const auto& contour : contours) {
    const Points2d points = contour.matrix();
    try {
      const Polygon<double> hull = convex_hull(points);
      const Ellipsed e = fit_ellipse_dls(hull.vertices);
      out.push_back({e, contour.size(), mean_squared_residual(points, e)});
    } catch (const Error&) {
      // degenerate hull or non-elliptical fit
    }
  }
  return out;
}

double area_fraction_outside(const Ellipsed& e, const Rect<double>& box) {
  const Polygon<double> poly = ellipse_polygon(e);
  const double total = poly.area();
  if (!(total > 0)) return 1;
  return std::clamp(1.0 - polygon_clip_area(poly, box) / total, 0.0, 1.0);
}

const BoundingBox* nearest_box(const Point2d& point, const std::vector<BoundingBox>& boxes) {
  const BoundingBox* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& b : boxes) {
    const double d = (b.center() - point).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = &b;
    }
  }
  return best;
}

std::vector<CandidateEllipse> filter_by_plate_box(const std::vector<CandidateEllipse>& candidates,
                                                  const std::vector<BoundingBox>& plates,
                                                  const HyperParams& hp) {
  if (plates.empty()) return candidates;
  std::vector<CandidateEllipse> out;
  for (const auto& c : candidates) {
    const BoundingBox* plate = nearest_box(c.ellipse.center(), plates);
    if (area_fraction_outside(c.ellipse, plate->rect()) < hp.a_p) out.push_back(c);
  }
  return out;
}

std::vector<CandidateEllipse> filter_by_food_distance(
    const std::vector<CandidateEllipse>& candidates, const std::vector<BoundingBox>& foods,
    const HyperParams& hp, bool squared) {
  if (foods.empty()) return candidates;
  std::vector<CandidateEllipse> out;
  for (const auto& c : candidates) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : foods) best = std::min(best, (f.center() - c.ellipse.center()).norm());
    if ((squared ? best * best : best) < hp.d_f) out.push_back(c);
  }
  return out;
}

}  // namespace rimfit
