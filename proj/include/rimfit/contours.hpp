#pragma once

#include <optional>
#include <vector>

#include "rimfit/detections.hpp"
#include "rimfit/edges.hpp"
#include "rimfit/geometry.hpp"

namespace rimfit {

/// The nine pipeline tunables. Defaults are the evaluation-A optimum.
struct HyperParams {
  double g_m = 0.6;       ///< IoU needed to merge two food boxes
  int s = 8;              ///< step between compared pixels along a contour
  double epsilon = 2;     ///< curvature gate, L1 pixels
  int l_min = 60;         ///< minimum extracted contour length, points
  double d_chord = 7.0;   ///< minimum deviation from the chord, pixels
  double h_gap = 10;      ///< allowed spread of rim distances, pixels
  double m_score = 150;   ///< grouping limit on mean squared residual, px^2
  double a_p = 0.08;      ///< maximum ellipse area fraction outside its plate box
  double d_f = 450;       ///< maximum ellipse-center to food-center distance, pixels

  static HyperParams set_a() { return {}; }
  static HyperParams set_b() { return {0.7, 7, 2, 60, 7.5, 10, 125, 0.06, 450}; }

  /// Throws BadConfig when a value is out of range.
  void validate() const;

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

/// A food box and the plate/bowl box nearest to it (center to center).
struct RimContext {
  BoundingBox food_box;
  BoundingBox plate_box;
};

/// p[u + s] - p[u].
Eigen::Vector2i step_vector(const RawContour& contour, std::size_t u, int s);

/// Curvature gate. Slides u one point at a time and compares the step
/// vectors d(u, u+s) and d(u+s, u+2s); while their L1 difference stays
/// within epsilon the run [u+s, u+2s] is appended to the current piece.
/// A failing window closes the piece, which is kept when it has at least
/// l_min points. Pieces are contiguous, disjoint runs of the input.
std::vector<Contour> extract_curved(const RawContour& contour, const HyperParams& hp);

/// Largest distance from a contour point to the line through its first and
/// last points (distance to the first point when those coincide).
double chord_deviation(const Contour& contour);

/// Drops contours whose chord deviation is below d_chord (squared
/// deviation when `squared` is set).
std::vector<Contour> filter_straight(const std::vector<Contour>& contours, const HyperParams& hp,
                                     bool squared = false);

/// Lowest visible point of a contour, i.e. the one with the largest y.
Pixel lowest_point(const Contour& contour);

/// Rim disambiguation for one food/plate pair. Contours whose lowest point
/// lies between the bottom edges of the food and plate boxes (and within
/// the plate's x-range) have their distance to the food bottom collected;
/// the most deviant one is dropped until the spread is at most h_gap.
/// Other contours pass through. Throws NoGap when the food box does not
/// end above the plate box.
std::vector<Contour> filter_rim(const std::vector<Contour>& contours, const RimContext& ctx,
                                const HyperParams& hp);

/// Mean squared distance of `points` to the sampled perimeter of `e`.
double mean_squared_residual(const Points2d& points, const Ellipsed& e);

/// Fit-and-score for the pooled points of two contours; empty when the
/// pooled fit is degenerate.
std::optional<double> pair_score(const Contour& first, const Contour& second);

/// Best-first merging: each round scores every pair and merges the pair
/// with the lowest score below m_score. Result is sorted canonically, so it
/// does not depend on input order.
std::vector<Contour> group_contours(const std::vector<Contour>& contours, const HyperParams& hp);

/// Canonical contour order used by grouping: by smallest (y, x) point,
/// then size, then points.
bool canonical_less(const Contour& lhs, const Contour& rhs);

}  // namespace rimfit
