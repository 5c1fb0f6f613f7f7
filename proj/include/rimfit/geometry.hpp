#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "rimfit/errors.hpp"

namespace rimfit {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

/// Point set stored one point per row.
template <typename Scalar>
using Points2 = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

using Point2d = Point2<double>;
using Points2d = Points2<double>;

/// Default perimeter resolution used for point-to-ellipse distances.
inline constexpr int kDistanceSamples = 720;
/// Polygon resolution used for ellipse area clipping.
inline constexpr int kAreaPolygonSides = 360;

template <typename Scalar>
Scalar wrap_to_pi(Scalar angle) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  angle = std::fmod(angle, pi);
  if (angle < 0) angle += pi;
  if (angle >= pi) angle -= pi;
  return angle;
}

/// Rotated ellipse. `a` is the semi-major axis and `theta` the direction
/// of the major axis, measured from +x towards +y, in [0, pi).
template <typename Scalar>
struct Ellipse {
  Scalar cx{0};
  Scalar cy{0};
  Scalar a{1};
  Scalar b{1};
  Scalar theta{0};

  /// Builds an ellipse from two radii in any order, enforcing a >= b and
  /// wrapping the angle. Circles get theta = 0.
  static Ellipse normalized(Scalar cx, Scalar cy, Scalar r1, Scalar r2,
                            Scalar theta) {
    if (r1 < r2) {
      std::swap(r1, r2);
      theta += std::numbers::pi_v<Scalar> / 2;
    }
    theta = wrap_to_pi(theta);
    if (r1 - r2 <= Eigen::NumTraits<Scalar>::dummy_precision() * r1) theta = 0;
    return Ellipse{cx, cy, r1, r2, theta};
  }

  Point2<Scalar> center() const { return {cx, cy}; }

  Scalar area() const { return std::numbers::pi_v<Scalar> * a * b; }

  bool is_valid() const {
    return std::isfinite(cx) && std::isfinite(cy) && std::isfinite(a) &&
           std::isfinite(b) && std::isfinite(theta) && b > 0 && a >= b &&
           theta >= 0 && theta < std::numbers::pi_v<Scalar>;
  }

  /// Point at parametric angle t.
  Point2<Scalar> at(Scalar t) const {
    const Scalar c = std::cos(theta), s = std::sin(theta);
    const Scalar u = a * std::cos(t), v = b * std::sin(t);
    return {cx + u * c - v * s, cy + u * s + v * c};
  }

  /// (x'/a)^2 + (y'/b)^2 in the ellipse frame; 1 on the perimeter.
  Scalar implicit(const Point2<Scalar>& p) const {
    const Scalar c = std::cos(theta), s = std::sin(theta);
    const Scalar dx = p.x() - cx, dy = p.y() - cy;
    const Scalar u = (dx * c + dy * s) / a;
    const Scalar v = (-dx * s + dy * c) / b;
    return u * u + v * v;
  }

  template <typename Other>
  Ellipse<Other> cast() const {
    return {Other(cx), Other(cy), Other(a), Other(b), Other(theta)};
  }

  friend bool operator==(const Ellipse&, const Ellipse&) = default;
};

using Ellipsed = Ellipse<double>;

/// Axis-aligned rectangle.
template <typename Scalar>
struct Rect {
  Scalar x_min{0};
  Scalar y_min{0};
  Scalar x_max{0};
  Scalar y_max{0};

  Scalar width() const { return x_max - x_min; }
  Scalar height() const { return y_max - y_min; }
  Scalar area() const { return std::max<Scalar>(width(), 0) * std::max<Scalar>(height(), 0); }
  Point2<Scalar> center() const { return {(x_min + x_max) / 2, (y_min + y_max) / 2}; }
  bool contains(const Point2<Scalar>& p) const {
    return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max;
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Closed polygon, vertices one per row.
template <typename Scalar>
struct Polygon {
  Points2<Scalar> vertices;

  Eigen::Index size() const { return vertices.rows(); }

  /// Shoelace area; positive for counter-clockwise vertex order.
  Scalar signed_area() const {
    const Eigen::Index n = vertices.rows();
    Scalar twice = 0;
    for (Eigen::Index i = 0, j = n - 1; i < n; j = i++) {
      twice += vertices(j, 0) * vertices(i, 1) - vertices(i, 0) * vertices(j, 1);
    }
    return twice / 2;
  }

  Scalar area() const { return std::abs(signed_area()); }
};

namespace detail {

template <typename Scalar>
Scalar cross(const Point2<Scalar>& o, const Point2<Scalar>& a, const Point2<Scalar>& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace detail

/// Converts general conic coefficients (A, B, C, D, E, F) of
/// A x^2 + B xy + C y^2 + D x + E y + F = 0 into ellipse parameters.
template <typename Scalar>
Ellipse<Scalar> ellipse_from_conic(const Eigen::Matrix<Scalar, 6, 1>& conic) {
  using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
  using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

  const Scalar A = conic(0), B = conic(1), C = conic(2);
  const Scalar discriminant = 4 * A * C - B * B;
  if (!(discriminant > 0)) {
    throw DegenerateConfiguration("conic is not an ellipse");
  }

  Matrix2 quad;
  quad << A, B / 2, B / 2, C;
  const Vector2 lin(conic(3), conic(4));
  const Vector2 center = quad.inverse() * (-lin / 2);
  Scalar level = conic(5) + lin.dot(center) / 2;
  if (A < 0) {
    quad = -quad;
    level = -level;
  }
  if (!(level < 0)) {
    throw DegenerateConfiguration("conic has no real points");
  }

  Eigen::SelfAdjointEigenSolver<Matrix2> solver(quad);
  const Vector2 lambda = solver.eigenvalues();
  const Vector2 major_dir = solver.eigenvectors().col(0);
  const Scalar a = std::sqrt(-level / lambda(0));
  const Scalar b = std::sqrt(-level / lambda(1));
  auto e = Ellipse<Scalar>::normalized(center.x(), center.y(), a, b,
                                       std::atan2(major_dir.y(), major_dir.x()));
  if (!e.is_valid()) throw DegenerateConfiguration("fit produced non-finite ellipse");
  return e;
}

/// Direct least-squares ellipse fit with the ellipse-specific constraint
/// 4AC - B^2 = 1 (numerically stable partitioned form). Data are centered
/// and scaled before solving.
template <typename Derived>
auto fit_ellipse_dls(const Eigen::MatrixBase<Derived>& points)
    -> Ellipse<typename Derived::Scalar> {
  using Scalar = typename Derived::Scalar;
  using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
  using Design = Eigen::Matrix<Scalar, Eigen::Dynamic, 3>;

  const Eigen::Index n = points.rows();
  if (points.cols() != 2) throw DegenerateConfiguration("points must be N x 2");
  if (n < 5) throw TooFewPoints("ellipse fit needs at least 5 points");

  const Point2<Scalar> mean = points.colwise().mean().transpose();
  Points2<Scalar> centered = points.rowwise() - mean.transpose();
  const Scalar scale = std::sqrt(centered.rowwise().squaredNorm().mean() / 2);
  if (!(scale > 0) || !std::isfinite(scale)) {
    throw DegenerateConfiguration("points are coincident or non-finite");
  }
  centered /= scale;

  const auto x = centered.col(0).array();
  const auto y = centered.col(1).array();
  Design quadratic(n, 3), linear(n, 3);
  quadratic.col(0) = x * x;
  quadratic.col(1) = x * y;
  quadratic.col(2) = y * y;
  linear.col(0) = x;
  linear.col(1) = y;
  linear.col(2).setOnes();

  const Matrix3 s1 = quadratic.transpose() * quadratic;
  const Matrix3 s2 = quadratic.transpose() * linear;
  const Matrix3 s3 = linear.transpose() * linear;

  Eigen::FullPivLU<Matrix3> lu(s3);
  lu.setThreshold(Scalar(1e-10));
  if (lu.rank() < 3) throw DegenerateConfiguration("points are collinear");

  const Matrix3 t = -lu.solve(s2.transpose());
  const Matrix3 m = s1 + s2 * t;
  // Premultiply by the inverse of the constraint matrix.
  Matrix3 reduced;
  reduced.row(0) = m.row(2) / 2;
  reduced.row(1) = -m.row(1);
  reduced.row(2) = m.row(0) / 2;

  Eigen::EigenSolver<Matrix3> solver(reduced);
  const auto values = solver.eigenvalues();
  const auto vectors = solver.eigenvectors();

  int best = -1;
  Scalar best_value = 0;
  for (int k = 0; k < 3; ++k) {
    const Vector3 v = vectors.col(k).real();
    if (vectors.col(k).imag().norm() > Scalar(1e-8)) continue;
    if (4 * v(0) * v(2) - v(1) * v(1) <= 0) continue;
    const Scalar lambda = values(k).real();
    if (best < 0 || lambda < best_value) {
      best = k;
      best_value = lambda;
    }
  }
  if (best < 0) throw DegenerateConfiguration("no elliptical solution");

  const Vector3 q = vectors.col(best).real();
  const Vector3 l = t * q;
  Eigen::Matrix<Scalar, 6, 1> conic;
  conic << q, l;
  const Ellipse<Scalar> unit = ellipse_from_conic<Scalar>(conic);
  return Ellipse<Scalar>::normalized(unit.cx * scale + mean.x(), unit.cy * scale + mean.y(),
                                     unit.a * scale, unit.b * scale, unit.theta);
}

/// Convex hull by monotone chain. Vertices are returned counter-clockwise
/// (positive signed area); collinear boundary points are dropped.
template <typename Derived>
auto convex_hull(const Eigen::MatrixBase<Derived>& points) -> Polygon<typename Derived::Scalar> {
  using Scalar = typename Derived::Scalar;
  std::vector<Point2<Scalar>> pts;
  pts.reserve(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) pts.emplace_back(points(i, 0), points(i, 1));

  const auto less = [](const Point2<Scalar>& p, const Point2<Scalar>& q) {
    return p.x() < q.x() || (p.x() == q.x() && p.y() < q.y());
  };
  std::sort(pts.begin(), pts.end(), less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw DegenerateConfiguration("convex hull needs 3 distinct points");

  std::vector<Point2<Scalar>> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && detail::cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && detail::cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw DegenerateConfiguration("points are collinear");

  Polygon<Scalar> poly;
  poly.vertices.resize(static_cast<Eigen::Index>(hull.size()), 2);
  for (std::size_t i = 0; i < hull.size(); ++i) poly.vertices.row(static_cast<Eigen::Index>(i)) = hull[i].transpose();
  return poly;
}

/// n perimeter points at parametric angles 2*pi*k/n.
template <typename Scalar>
Points2<Scalar> sample_ellipse(const Ellipse<Scalar>& e, int n) {
  if (n < 3) throw std::invalid_argument("sample_ellipse needs n >= 3");
  Points2<Scalar> out(n, 2);
  const Scalar step = 2 * std::numbers::pi_v<Scalar> / Scalar(n);
  for (int k = 0; k < n; ++k) out.row(k) = e.at(step * Scalar(k)).transpose();
  return out;
}

template <typename Scalar>
Polygon<Scalar> ellipse_polygon(const Ellipse<Scalar>& e, int sides = kAreaPolygonSides) {
  return Polygon<Scalar>{sample_ellipse(e, sides)};
}

/// Distance from every row of `points` to the sampled perimeter of `e`.
template <typename Derived>
auto point_ellipse_distances(const Eigen::MatrixBase<Derived>& points,
                             const Ellipse<typename Derived::Scalar>& e,
                             int samples = kDistanceSamples)
    -> Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> {
  using Scalar = typename Derived::Scalar;
  const Points2<Scalar> perimeter = sample_ellipse(e, samples);
  Eigen::Array<Scalar, Eigen::Dynamic, 1> out(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const Point2<Scalar> p = points.row(i).transpose();
    out(i) = std::sqrt((perimeter.rowwise() - p.transpose()).rowwise().squaredNorm().minCoeff());
  }
  return out;
}

template <typename Scalar>
Scalar point_ellipse_distance(const Point2<Scalar>& p, const Ellipse<Scalar>& e,
                              int samples = kDistanceSamples) {
  Points2<Scalar> one(1, 2);
  one.row(0) = p.transpose();
  return point_ellipse_distances(one, e, samples)(0);
}

/// Area of `poly` inside `box` (Sutherland-Hodgman against the four edges).
template <typename Scalar>
Scalar polygon_clip_area(const Polygon<Scalar>& poly, const Rect<Scalar>& box) {
  std::vector<Point2<Scalar>> current;
  current.reserve(static_cast<std::size_t>(poly.size()) + 8);
  for (Eigen::Index i = 0; i < poly.size(); ++i) current.emplace_back(poly.vertices(i, 0), poly.vertices(i, 1));

  // Each clip edge: keep points with sign * coord(axis) <= sign * bound.
  struct Edge {
    int axis;
    Scalar sign;
    Scalar bound;
  };
  const Edge edges[4] = {{0, -1, -box.x_min}, {0, 1, box.x_max}, {1, -1, -box.y_min}, {1, 1, box.y_max}};

  std::vector<Point2<Scalar>> next;
  for (const Edge& edge : edges) {
    if (current.empty()) break;
    next.clear();
    const auto inside = [&](const Point2<Scalar>& p) { return edge.sign * p(edge.axis) <= edge.bound; };
    for (std::size_t i = 0; i < current.size(); ++i) {
      const Point2<Scalar>& prev = current[(i + current.size() - 1) % current.size()];
      const Point2<Scalar>& cur = current[i];
      const bool in_prev = inside(prev), in_cur = inside(cur);
      if (in_cur != in_prev) {
        const Scalar t = (edge.bound - edge.sign * prev(edge.axis)) /
                         (edge.sign * (cur(edge.axis) - prev(edge.axis)));
        next.push_back(prev + t * (cur - prev));
      }
      if (in_cur) next.push_back(cur);
    }
    current.swap(next);
  }
  if (current.size() < 3) return 0;

  Polygon<Scalar> clipped;
  clipped.vertices.resize(static_cast<Eigen::Index>(current.size()), 2);
  for (std::size_t i = 0; i < current.size(); ++i) clipped.vertices.row(static_cast<Eigen::Index>(i)) = current[i].transpose();
  return clipped.area();
}

}  // namespace rimfit
