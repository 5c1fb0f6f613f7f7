#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rimfit/geometry.hpp"
#include "test_support.hpp"

using namespace rimfit;
using rimfit::test::Rng;

namespace {

Points2d rows(std::initializer_list<std::pair<double, double>> pts) {
  Points2d m(static_cast<Eigen::Index>(pts.size()), 2);
  Eigen::Index i = 0;
  for (const auto& [x, y] : pts) m.row(i++) << x, y;
  return m;
}

// Ray casting, independent of the clipping code.
bool in_polygon(const Polygon<double>& poly, double x, double y) {
  bool inside = false;
  const auto& v = poly.vertices;
  for (Eigen::Index i = 0, j = v.rows() - 1; i < v.rows(); j = i++) {
    if ((v(i, 1) > y) != (v(j, 1) > y) &&
        x < (v(j, 0) - v(i, 0)) * (y - v(i, 1)) / (v(j, 1) - v(i, 1)) + v(i, 0)) {
      inside = !inside;
    }
  }
  return inside;
}

}  // namespace

TEST_SUITE("fit_ellipse_dls") {
  TEST_CASE("eight points on a circle") {
    Points2d pts(8, 2);
    for (int k = 0; k < 8; ++k) {
      const double t = 2 * std::numbers::pi * k / 8;
      pts.row(k) << 50 + 20 * std::cos(t), 50 + 20 * std::sin(t);
    }
    const Ellipsed e = fit_ellipse_dls(pts);
    CHECK(e.cx == doctest::Approx(50).epsilon(1e-9));
    CHECK(std::abs(e.cx - 50) < 1e-6);
    CHECK(std::abs(e.cy - 50) < 1e-6);
    CHECK(std::abs(e.a - 20) < 1e-6);
    CHECK(std::abs(e.b - 20) < 1e-6);
    CHECK(e.theta == 0);
  }

  TEST_CASE("twelve samples of a rotated ellipse") {
    const Ellipsed truth{100, 80, 40, 25, 0.6};
    const Ellipsed e = fit_ellipse_dls(sample_ellipse(truth, 12));
    CHECK(std::abs(e.cx - 100) / 100 < 1e-6);
    CHECK(std::abs(e.cy - 80) / 80 < 1e-6);
    CHECK(std::abs(e.a - 40) / 40 < 1e-6);
    CHECK(std::abs(e.b - 25) / 25 < 1e-6);
    CHECK(std::abs(e.theta - 0.6) / 0.6 < 1e-6);
  }

  TEST_CASE("collinear points are degenerate") {
    const Points2d pts = rows({{0, 0}, {1, 2}, {2, 4}, {3, 6}, {4, 8}});
    CHECK_THROWS_AS(fit_ellipse_dls(pts), DegenerateConfiguration);
  }

  TEST_CASE("fewer than five points") {
    const Points2d pts = rows({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    CHECK_THROWS_AS(fit_ellipse_dls(pts), TooFewPoints);
  }

  TEST_CASE("points on a hyperbola still give an ellipse") {
    Points2d pts(10, 2);
    for (int k = 0; k < 10; ++k) {
      const double x = 1 + 0.5 * k;
      pts.row(k) << x, (k % 2 ? 1.0 : -1.0) * std::sqrt(x * x - 1);
    }
    const Ellipsed e = fit_ellipse_dls(pts);
    CHECK(e.is_valid());
    CHECK(e.b <= e.a);
  }

  TEST_CASE("round trip over random ellipses") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const Ellipsed truth = rimfit::test::random_ellipse(rng);
      const Ellipsed e = fit_ellipse_dls(sample_ellipse(truth, 12));
      REQUIRE(e.is_valid());
      CHECK(std::abs(e.cx - truth.cx) < 1e-6);
      CHECK(std::abs(e.cy - truth.cy) < 1e-6);
      CHECK(std::abs(e.a - truth.a) / truth.a < 1e-6);
      CHECK(std::abs(e.b - truth.b) / truth.b < 1e-6);
      if (truth.b / truth.a < 0.95) CHECK(rimfit::test::angle_gap(e.theta, truth.theta) < 1e-6);
    }
  }

  TEST_CASE("translation moves only the center") {
    Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
      const Ellipsed truth = rimfit::test::random_ellipse(rng);
      Points2d pts = sample_ellipse(truth, 30);
      for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        pts(i, 0) += rng.uniform(-0.3, 0.3);
        pts(i, 1) += rng.uniform(-0.3, 0.3);
      }
      const double dx = rng.uniform(-500, 500), dy = rng.uniform(-500, 500);
      const Ellipsed base = fit_ellipse_dls(pts);
      const Ellipsed moved = fit_ellipse_dls(Points2d(pts.rowwise() + Eigen::RowVector2d(dx, dy)));
      CHECK(std::abs(moved.cx - base.cx - dx) < 1e-9);
      CHECK(std::abs(moved.cy - base.cy - dy) < 1e-9);
      CHECK(std::abs(moved.a - base.a) < 1e-9);
      CHECK(std::abs(moved.b - base.b) < 1e-9);
    }
  }

  TEST_CASE("float scalar instantiation") {
    const Ellipse<float> truth{10.f, 20.f, 8.f, 5.f, 0.3f};
    const Ellipse<float> e = fit_ellipse_dls(sample_ellipse(truth, 24));
    CHECK(std::abs(e.cx - 10.f) < 1e-3f);
    CHECK(std::abs(e.a - 8.f) < 1e-3f);
  }
}

TEST_SUITE("ellipse type") {
  TEST_CASE("normalization swaps axes and wraps the angle") {
    const Ellipsed e = Ellipsed::normalized(0, 0, 3, 5, -0.2);
    CHECK(e.a == 5);
    CHECK(e.b == 3);
    CHECK(e.theta == doctest::Approx(std::numbers::pi / 2 - 0.2));
    CHECK(e.is_valid());
    CHECK(Ellipsed::normalized(0, 0, 4, 4, 1.0).theta == 0);
  }

  TEST_CASE("conic with no real points") {
    Eigen::Matrix<double, 6, 1> conic;
    conic << 1, 0, 1, 0, 0, 1;  // x^2 + y^2 + 1 = 0
    CHECK_THROWS_AS(ellipse_from_conic(conic), DegenerateConfiguration);
  }
}

TEST_SUITE("convex_hull") {
  TEST_CASE("interior point dropped") {
    const auto hull = convex_hull(rows({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}}));
    CHECK(hull.size() == 4);
    CHECK(hull.signed_area() == doctest::Approx(1.0));
  }

  TEST_CASE("triangle is its own hull") {
    const auto hull = convex_hull(rows({{0, 0}, {4, 1}, {1, 3}}));
    CHECK(hull.size() == 3);
    CHECK(hull.signed_area() > 0);
  }

  TEST_CASE("collinear input") {
    CHECK_THROWS_AS(convex_hull(rows({{0, 0}, {1, 1}, {2, 2}, {3, 3}})), DegenerateConfiguration);
  }

  TEST_CASE("random disk: containment, orientation, idempotence") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      Points2d pts(100, 2);
      for (int i = 0; i < 100; ++i) {
        const double r = 50 * std::sqrt(rng.uniform(0, 1)), t = rng.uniform(0, 2 * std::numbers::pi);
        pts.row(i) << r * std::cos(t), r * std::sin(t);
      }
      const auto hull = convex_hull(pts);
      CHECK(hull.signed_area() > 0);
      const auto& v = hull.vertices;
      for (int i = 0; i < 100; ++i) {
        for (Eigen::Index k = 0; k < v.rows(); ++k) {
          const Eigen::Index n = (k + 1) % v.rows();
          const double cross = (v(n, 0) - v(k, 0)) * (pts(i, 1) - v(k, 1)) -
                               (v(n, 1) - v(k, 1)) * (pts(i, 0) - v(k, 0));
          CHECK(cross >= -1e-9);
        }
      }
      const auto again = convex_hull(hull.vertices);
      CHECK(again.vertices == hull.vertices);
    }
  }
}

TEST_SUITE("sample_ellipse") {
  TEST_CASE("unit circle cardinal points") {
    const Points2d pts = sample_ellipse(Ellipsed{0, 0, 1, 1, 0}, 4);
    const double expected[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int k = 0; k < 4; ++k) {
      CHECK(std::abs(pts(k, 0) - expected[k][0]) < 1e-12);
      CHECK(std::abs(pts(k, 1) - expected[k][1]) < 1e-12);
    }
  }

  TEST_CASE("samples satisfy the implicit equation") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      const Ellipsed e = rimfit::test::random_ellipse(rng);
      const Points2d pts = sample_ellipse(e, 360);
      for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        CHECK(std::abs(e.implicit(pts.row(i).transpose()) - 1) < 1e-9);
      }
    }
  }

  TEST_CASE("n below three") { CHECK_THROWS(sample_ellipse(Ellipsed{}, 2)); }
}

TEST_SUITE("point_ellipse_distance") {
  TEST_CASE("perimeter points are within the sampling bound") {
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
      const Ellipsed e = rimfit::test::random_ellipse(rng);
      const Points2d pts = sample_ellipse(e, 97);
      const auto d = point_ellipse_distances(pts, e);
      CHECK(d.maxCoeff() < std::numbers::pi * e.a / kDistanceSamples);
    }
  }

  TEST_CASE("circle center") {
    const Ellipsed c{5, 7, 30, 30, 0};
    CHECK(std::abs(point_ellipse_distance(Point2d(5, 7), c) - 30) < std::numbers::pi * 30 / kDistanceSamples);
  }

  TEST_CASE("outside point against unit circle") {
    CHECK(std::abs(point_ellipse_distance(Point2d(3, 0), Ellipsed{0, 0, 1, 1, 0}) - 2.0) < 1e-3);
  }
}

TEST_SUITE("polygon_clip_area") {
  const Polygon<double> square{rows({{0, 0}, {1, 0}, {1, 1}, {0, 1}})};

  TEST_CASE("fully inside") { CHECK(polygon_clip_area(square, Rect<double>{-1, -1, 2, 2}) == doctest::Approx(1.0)); }
  TEST_CASE("fully outside") { CHECK(polygon_clip_area(square, Rect<double>{5, 5, 6, 6}) == 0.0); }
  TEST_CASE("right half") { CHECK(polygon_clip_area(square, Rect<double>{0.5, -1, 3, 3}) == doctest::Approx(0.5)); }

  TEST_CASE("agrees with stratified Monte Carlo") {
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
      Points2d pts(12, 2);
      for (int i = 0; i < 12; ++i) pts.row(i) << rng.uniform(0, 100), rng.uniform(0, 100);
      const auto poly = convex_hull(pts);
      const Rect<double> box{rng.uniform(10, 50), rng.uniform(10, 50), rng.uniform(50, 90), rng.uniform(50, 90)};

      const double x0 = pts.col(0).minCoeff(), x1 = pts.col(0).maxCoeff();
      const double y0 = pts.col(1).minCoeff(), y1 = pts.col(1).maxCoeff();
      const int grid = 700;
      long hits = 0;
      for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
          const double x = x0 + (x1 - x0) * (i + rng.uniform(0, 1)) / grid;
          const double y = y0 + (y1 - y0) * (j + rng.uniform(0, 1)) / grid;
          if (box.contains(Point2d(x, y)) && in_polygon(poly, x, y)) ++hits;
        }
      }
      const double estimate = (x1 - x0) * (y1 - y0) * static_cast<double>(hits) / (grid * grid);
      const double exact = polygon_clip_area(poly, box);
      CHECK(exact <= poly.area() + 1e-9);
      CHECK(std::abs(exact - estimate) <= 0.01 * exact + 1e-9);
    }
  }
}
