#include "rimfit/edges.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rimfit/errors.hpp"

namespace rimfit {

namespace {

// Half-sample symmetric reflection: (d c b a | a b c d | d c b a).
int reflect(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0;
  for (int k = -radius; k <= radius; ++k) {
    const double w = std::exp(-0.5 * k * k / (sigma * sigma));
    kernel[static_cast<std::size_t>(k + radius)] = w;
    sum += w;
  }
  for (double& w : kernel) w /= sum;
  return kernel;
}

// Eight neighbour offsets, clockwise on screen starting east (y grows down).
constexpr std::array<int, 8> kDx = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr std::array<int, 8> kDy = {0, 1, 1, 1, 0, -1, -1, -1};

// Offsets from the incoming direction in order of preference: straight,
// then growing turns with the clockwise side first.
constexpr std::array<int, 7> kTurnOrder = {0, 1, 7, 2, 6, 3, 5};

}  // namespace

GrayImage gaussian_blur(const GrayImage& image, double sigma) {
  if (!(sigma > 0)) throw std::invalid_argument("gaussian_blur: sigma must be positive");
  const int h = static_cast<int>(image.rows()), w = static_cast<int>(image.cols());
  const auto kernel = gaussian_kernel(sigma);
  const int radius = static_cast<int>(kernel.size() / 2);

  GrayImage horizontal(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[static_cast<std::size_t>(k + radius)] * image(y, reflect(x + k, w));
      }
      horizontal(y, x) = acc;
    }
  }
  GrayImage out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[static_cast<std::size_t>(k + radius)] * horizontal(reflect(y + k, h), x);
      }
      out(y, x) = acc;
    }
  }
  return out;
}

Gradients sobel(const GrayImage& image) {
  const int h = static_cast<int>(image.rows()), w = static_cast<int>(image.cols());
  Gradients g{GrayImage(h, w), GrayImage(h, w), GrayImage(h, w)};
  const auto px = [&](int x, int y) { return image(reflect(y, h), reflect(x, w)); };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = (px(x + 1, y - 1) + 2 * px(x + 1, y) + px(x + 1, y + 1)) -
                        (px(x - 1, y - 1) + 2 * px(x - 1, y) + px(x - 1, y + 1));
      const double gy = (px(x - 1, y + 1) + 2 * px(x, y + 1) + px(x + 1, y + 1)) -
                        (px(x - 1, y - 1) + 2 * px(x, y - 1) + px(x + 1, y - 1));
      g.gx(y, x) = gx;
      g.gy(y, x) = gy;
      g.magnitude(y, x) = std::hypot(gx, gy);
    }
  }
  return g;
}

CannyThresholds quantile_thresholds(const GrayImage& magnitude, double low_quantile,
                                    double high_quantile) {
  if (low_quantile < 0 || high_quantile > 1 || low_quantile > high_quantile) {
    throw InvalidThresholds("quantiles must satisfy 0 <= low <= high <= 1");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double peak = magnitude.size() > 0 ? magnitude.maxCoeff() : 0.0;
  if (!(peak > 0)) return {inf, inf};

  // Values below this are summation noise from the truncated kernel.
  const double floor = peak * 1e-9;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(magnitude.size()));
  for (Eigen::Index i = 0; i < magnitude.size(); ++i) {
    if (magnitude.data()[i] > floor) values.push_back(magnitude.data()[i]);
  }
  std::sort(values.begin(), values.end());
  const auto quantile = [&](double q) {
    const double position = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(position));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double t = position - static_cast<double>(lo);
    return values[lo] * (1 - t) + values[hi] * t;
  };
  return {quantile(low_quantile), quantile(high_quantile)};
}

namespace {

EdgeMap canny_from_gradients(const Gradients& g, double low, double high) {
  const int h = static_cast<int>(g.magnitude.rows()), w = static_cast<int>(g.magnitude.cols());
  const GrayImage& mag = g.magnitude;

  EdgeMap candidate = EdgeMap::Constant(h, w, false);
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      const double m = mag(y, x);
      if (!(m > 0) || m < low) continue;
      const double gx = g.gx(y, x), gy = g.gy(y, x);
      const double ax = std::abs(gx), ay = std::abs(gy);
      const int sx = gx >= 0 ? 1 : -1, sy = gy >= 0 ? 1 : -1;
      // Interpolate the magnitude where the gradient line crosses the 3x3 ring.
      double forward, backward;
      if (ax >= ay) {
        const double t = ay / ax;
        forward = (1 - t) * mag(y, x + sx) + t * mag(y + sy, x + sx);
        backward = (1 - t) * mag(y, x - sx) + t * mag(y - sy, x - sx);
      } else {
        const double t = ax / ay;
        forward = (1 - t) * mag(y + sy, x) + t * mag(y + sy, x + sx);
        backward = (1 - t) * mag(y - sy, x) + t * mag(y - sy, x - sx);
      }
      // Strict on one side so plateaus of equal magnitude keep one pixel.
      candidate(y, x) = m > backward && m >= forward;
    }
  }

  EdgeMap edges = EdgeMap::Constant(h, w, false);
  std::vector<Pixel> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!candidate(y, x) || edges(y, x) || mag(y, x) < high) continue;
      edges(y, x) = true;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        for (int k = 0; k < 8; ++k) {
          const int nx = p.x() + kDx[static_cast<std::size_t>(k)];
          const int ny = p.y() + kDy[static_cast<std::size_t>(k)];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          if (candidate(ny, nx) && !edges(ny, nx)) {
            edges(ny, nx) = true;
            stack.emplace_back(nx, ny);
          }
        }
      }
    }
  }
  return edges;
}

}  // namespace

EdgeMap canny(const GrayImage& image, double sigma, double low, double high) {
  if (image.size() == 0) throw EmptyImage("canny: empty image");
  if (!(sigma > 0)) throw std::invalid_argument("canny: sigma must be positive");
  if (low < 0 || low > high) throw InvalidThresholds("canny: need 0 <= low <= high");
  return canny_from_gradients(sobel(gaussian_blur(image, sigma)), low, high);
}

EdgeMap canny_quantile(const GrayImage& image, double sigma, double low_quantile,
                       double high_quantile) {
  if (image.size() == 0) throw EmptyImage("canny: empty image");
  const Gradients g = sobel(gaussian_blur(image, sigma));
  const CannyThresholds t = quantile_thresholds(g.magnitude, low_quantile, high_quantile);
  if (!std::isfinite(t.high)) return EdgeMap::Constant(image.rows(), image.cols(), false);
  return canny_from_gradients(g, t.low, t.high);
}

std::vector<RawContour> trace_contours(const EdgeMap& edges) {
  const int h = static_cast<int>(edges.rows()), w = static_cast<int>(edges.cols());
  EdgeMap visited = EdgeMap::Constant(h, w, false);
  const auto open = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < w && y < h && edges(y, x) && !visited(y, x);
  };

  // Walks from `from`, appending to `out`; returns the first step direction.
  const auto walk = [&](Pixel from, int incoming, std::vector<Pixel>& out) {
    int first = -1;
    for (;;) {
      int chosen = -1;
      if (incoming < 0) {
        for (int k = 0; k < 8 && chosen < 0; ++k) {
          if (open(from.x() + kDx[static_cast<std::size_t>(k)], from.y() + kDy[static_cast<std::size_t>(k)])) chosen = k;
        }
      } else {
        for (int offset : kTurnOrder) {
          const int k = (incoming + offset) % 8;
          if (open(from.x() + kDx[static_cast<std::size_t>(k)], from.y() + kDy[static_cast<std::size_t>(k)])) {
            chosen = k;
            break;
          }
        }
      }
      if (chosen < 0) return first;
      if (first < 0) first = chosen;
      from = Pixel(from.x() + kDx[static_cast<std::size_t>(chosen)], from.y() + kDy[static_cast<std::size_t>(chosen)]);
      visited(from.y(), from.x()) = true;
      out.push_back(from);
      incoming = chosen;
    }
  };

  std::vector<RawContour> contours;
  std::vector<Pixel> forward, backward;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!open(x, y)) continue;
      visited(y, x) = true;
      forward.clear();
      backward.clear();
      const int first = walk(Pixel(x, y), -1, forward);
      if (first >= 0) walk(Pixel(x, y), (first + 4) % 8, backward);

      RawContour contour;
      contour.points.reserve(forward.size() + backward.size() + 1);
      contour.points.assign(backward.rbegin(), backward.rend());
      contour.points.emplace_back(x, y);
      contour.points.insert(contour.points.end(), forward.begin(), forward.end());
      contours.push_back(std::move(contour));
    }
  }
  return contours;
}

}  // namespace rimfit
