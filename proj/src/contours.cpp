#include "rimfit/contours.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "rimfit/errors.hpp"

namespace rimfit {

void HyperParams::validate() const {
  if (!(g_m > 0 && g_m <= 1)) throw BadConfig("g_m must be in (0, 1]");
  if (s < 1) throw BadConfig("s must be >= 1");
  if (!(epsilon > 0)) throw BadConfig("epsilon must be positive");
  if (l_min < 1) throw BadConfig("l_min must be >= 1");
  if (!(d_chord > 0)) throw BadConfig("d_chord must be positive");
  if (!(h_gap > 0)) throw BadConfig("h_gap must be positive");
  if (!(m_score > 0)) throw BadConfig("m_score must be positive");
  if (!(a_p > 0 && a_p < 1)) throw BadConfig("a_p must be in (0, 1)");
  if (!(d_f > 0)) throw BadConfig("d_f must be positive");
}

Eigen::Vector2i step_vector(const RawContour& contour, std::size_t u, int s) {
  if (s < 0 || u + static_cast<std::size_t>(s) >= contour.size()) {
    throw IndexOutOfRange("step_vector: u + s beyond contour end");
  }
  return contour[u + static_cast<std::size_t>(s)] - contour[u];
}

std::vector<Contour> extract_curved(const RawContour& contour, const HyperParams& hp) {
  std::vector<Contour> out;
  const std::size_t n = contour.size();
  const auto s = static_cast<std::size_t>(hp.s);

  std::ptrdiff_t start = -1, end = -1, last_end = -1;
  const auto close = [&] {
    if (start < 0) return;
    if (end - start + 1 >= hp.l_min) {
      Contour piece;
      piece.points.assign(contour.points.begin() + start, contour.points.begin() + end + 1);
      out.push_back(std::move(piece));
    }
    last_end = end;
    start = -1;
  };

  for (std::size_t u = 0; u + 2 * s < n; ++u) {
    const std::size_t v = u + s;
    const Eigen::Vector2i change = (contour[v + s] - contour[v]) - (contour[v] - contour[u]);
    const double a = std::abs(change.x()) + std::abs(change.y());
    if (a <= hp.epsilon) {
      if (start < 0) start = std::max(static_cast<std::ptrdiff_t>(v), last_end + 1);
      end = static_cast<std::ptrdiff_t>(v + s);
    } else {
      close();
    }
  }
  close();
  return out;
}

double chord_deviation(const Contour& contour) {
  if (contour.size() < 2) return 0;
  const Point2d first = contour.points.front().cast<double>();
  const Point2d chord = contour.points.back().cast<double>() - first;
  const double length = chord.norm();
  double worst = 0;
  for (const auto& p : contour.points) {
    const Point2d rel = p.cast<double>() - first;
    const double dev = length > 0 ? std::abs(chord.x() * rel.y() - chord.y() * rel.x()) / length
                                  : rel.norm();
    worst = std::max(worst, dev);
  }
  return worst;
}

std::vector<Contour> filter_straight(const std::vector<Contour>& contours, const HyperParams& hp,
                                     bool squared) {
  std::vector<Contour> out;
  for (const auto& c : contours) {
    const double dev = chord_deviation(c);
    if ((squared ? dev * dev : dev) >= hp.d_chord) out.push_back(c);
  }
  return out;
}

Pixel lowest_point(const Contour& contour) {
  return *std::max_element(contour.points.begin(), contour.points.end(),
                           [](const Pixel& l, const Pixel& r) { return l.y() < r.y(); });
}

std::vector<Contour> filter_rim(const std::vector<Contour>& contours, const RimContext& ctx,
                                const HyperParams& hp) {
  const double food_bottom = ctx.food_box.y_max;
  const double plate_bottom = ctx.plate_box.y_max;
  if (!(food_bottom < plate_bottom)) throw NoGap("food box does not end above its plate box");

  struct Entry {
    std::size_t index;
    double distance;
  };
  std::vector<Entry> band;
  for (std::size_t i = 0; i < contours.size(); ++i) {
    if (contours[i].empty()) continue;
    const Pixel low = lowest_point(contours[i]);
    if (low.y() < food_bottom || low.y() > plate_bottom) continue;
    if (low.x() < ctx.plate_box.x_min || low.x() > ctx.plate_box.x_max) continue;
    band.push_back({i, std::abs(food_bottom - low.y())});
  }

  std::vector<bool> removed(contours.size(), false);
  const auto spread = [&] {
    const auto [lo, hi] = std::minmax_element(band.begin(), band.end(), [](const Entry& l, const Entry& r) {
      return l.distance < r.distance;
    });
    return hi->distance - lo->distance;
  };
  while (band.size() >= 2 && spread() > hp.h_gap) {
    double mean = 0;
    for (const auto& e : band) mean += e.distance;
    mean /= static_cast<double>(band.size());

    std::size_t worst = 0;
    double worst_dev = -1;
    for (std::size_t k = 0; k < band.size(); ++k) {
      const double dev = std::abs(band[k].distance - mean);
      const double tol = 1e-9 * (1 + std::abs(dev));
      const bool tie = std::abs(dev - worst_dev) <= tol;
      if ((!tie && dev > worst_dev) || (tie && band[k].distance >= band[worst].distance)) {
        worst = k;
        worst_dev = std::max(dev, worst_dev);
      }
    }
    removed[band[worst].index] = true;
    band.erase(band.begin() + static_cast<std::ptrdiff_t>(worst));
  }

  std::vector<Contour> out;
  for (std::size_t i = 0; i < contours.size(); ++i) {
    if (!removed[i]) out.push_back(contours[i]);
  }
  return out;
}

double mean_squared_residual(const Points2d& points, const Ellipsed& e) {
  if (points.rows() == 0) return 0;
  return point_ellipse_distances(points, e).square().mean();
}

namespace {

Points2d pooled(const Contour& first, const Contour& second) {
  Points2d pts(static_cast<Eigen::Index>(first.size() + second.size()), 2);
  pts << first.matrix(), second.matrix();
  return pts;
}

}  // namespace

std::optional<double> pair_score(const Contour& first, const Contour& second) {
  const Points2d pts = pooled(first, second);
  try {
    return mean_squared_residual(pts, fit_ellipse_dls(pts));
  } catch (const Error&) {
    return std::nullopt;
  }
}

bool canonical_less(const Contour& lhs, const Contour& rhs) {
  const auto key = [](const Contour& c) {
    Pixel best(0, 0);
    bool any = false;
    for (const auto& p : c.points) {
      if (!any || p.y() < best.y() || (p.y() == best.y() && p.x() < best.x())) best = p;
      any = true;
    }
    return std::tuple(any ? best.y() : -1, any ? best.x() : -1, c.size());
  };
  const auto kl = key(lhs), kr = key(rhs);
  if (kl != kr) return kl < kr;
  return std::lexicographical_compare(
      lhs.points.begin(), lhs.points.end(), rhs.points.begin(), rhs.points.end(),
      [](const Pixel& l, const Pixel& r) { return std::tie(l.y(), l.x()) < std::tie(r.y(), r.x()); });
}

std::vector<Contour> group_contours(const std::vector<Contour>& contours, const HyperParams& hp) {
  std::vector<Contour> items = contours;
  std::sort(items.begin(), items.end(), canonical_less);
  std::vector<int> ids(items.size());
  std::iota(ids.begin(), ids.end(), 0);
  int next_id = static_cast<int>(items.size());

  std::map<std::pair<int, int>, std::optional<double>> cache;
  const auto score = [&](std::size_t i, std::size_t j) {
    const auto key = std::minmax(ids[i], ids[j]);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, pair_score(items[i], items[j])).first;
    return it->second;
  };

  for (;;) {
    std::size_t best_i = 0, best_j = 0;
    std::optional<double> best;
    for (std::size_t i = 0; i < items.size(); ++i) {
      for (std::size_t j = i + 1; j < items.size(); ++j) {
        const auto s = score(i, j);
        if (s && *s < hp.m_score && (!best || *s < *best)) {
          best = s;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (!best) break;

    Contour merged = items[best_i];
    merged.points.insert(merged.points.end(), items[best_j].points.begin(), items[best_j].points.end());
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(best_j));
    ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(best_j));
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(best_i));
    ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(best_i));

    const auto pos = std::upper_bound(items.begin(), items.end(), merged, canonical_less);
    const auto offset = pos - items.begin();
    items.insert(pos, std::move(merged));
    ids.insert(ids.begin() + offset, next_id++);
  }
  return items;
}

}  // namespace rimfit
