#pragma once

#include <Eigen/Core>

#include <vector>

#include "rimfit/geometry.hpp"
#include "rimfit/image.hpp"

namespace rimfit {

/// Binary edge mask with the same shape as its source image.
using EdgeMap = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Integer pixel coordinate (x, y).
using Pixel = Eigen::Vector2i;

/// Ordered sequence of pixels.
struct Contour {
  std::vector<Pixel> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  const Pixel& operator[](std::size_t i) const { return points[i]; }

  /// Points as an N x 2 real matrix.
  template <typename Scalar = double>
  Points2<Scalar> matrix() const {
    Points2<Scalar> out(static_cast<Eigen::Index>(points.size()), 2);
    for (std::size_t i = 0; i < points.size(); ++i) {
      out(static_cast<Eigen::Index>(i), 0) = Scalar(points[i].x());
      out(static_cast<Eigen::Index>(i), 1) = Scalar(points[i].y());
    }
    return out;
  }

  friend bool operator==(const Contour&, const Contour&) = default;
};

/// A contour as traced from the edge map, before any filtering.
using RawContour = Contour;

struct Gradients {
  GrayImage gx;
  GrayImage gy;
  GrayImage magnitude;
};

struct CannyThresholds {
  double low = 0;
  double high = 0;
};

/// Separable Gaussian with radius ceil(4 sigma) and reflected borders.
GrayImage gaussian_blur(const GrayImage& image, double sigma);

/// 3x3 Sobel derivatives with reflected borders.
Gradients sobel(const GrayImage& image);

/// Linear-interpolated quantiles of the nonzero entries of `magnitude`.
/// Returns infinite thresholds when every entry is zero.
CannyThresholds quantile_thresholds(const GrayImage& magnitude, double low_quantile,
                                    double high_quantile);

/// Canny edge detector with absolute hysteresis thresholds on the Sobel
/// magnitude of the smoothed image.
EdgeMap canny(const GrayImage& image, double sigma, double low, double high);

/// Canny with thresholds taken as quantiles of the nonzero gradient
/// magnitudes of the smoothed image.
EdgeMap canny_quantile(const GrayImage& image, double sigma, double low_quantile,
                       double high_quantile);

/// Splits edge pixels into ordered 8-connected traces. Every edge pixel
/// lands in exactly one contour. Walks prefer the smallest turn, breaking
/// ties clockwise; branches left behind at junctions start new contours.
std::vector<RawContour> trace_contours(const EdgeMap& edges);

}  // namespace rimfit
