#include "rimfit/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rimfit/errors.hpp"

namespace rimfit {

namespace {

constexpr double kMargin = 5;
constexpr double kBoxPadding = 5;
constexpr double kLineHalfWidth = 1.5;
constexpr double kBodyLevel = 0.45;
constexpr double kClutterOnFill = 0.3;
constexpr double kClutterOnBackground = 0.7;
constexpr double kFoodRegionScale = 0.5;
constexpr double kStrokeWidth = 3;
constexpr double kPlateScore = 0.9;
constexpr double kFoodScore = 0.8;
constexpr int kSuper = 4;
constexpr double kMinCurvatureRadius = 130;

// Portable uniform draws on top of mt19937_64 so corpora match across
// standard library implementations.
class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1.0p-53);
  }
  int integer(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Extent {
  double hx;
  double hy;
};

Extent half_extent(const Ellipsed& e) {
  const double c = std::cos(e.theta), s = std::sin(e.theta);
  return {std::sqrt(e.a * e.a * c * c + e.b * e.b * s * s),
          std::sqrt(e.a * e.a * s * s + e.b * e.b * c * c)};
}

// Ellipse in its own frame, for fast membership tests.
struct Frame {
  double cx, cy, c, s, inv_a2, inv_b2;

  explicit Frame(const Ellipsed& e)
      : cx(e.cx), cy(e.cy), c(std::cos(e.theta)), s(std::sin(e.theta)),
        inv_a2(1 / (e.a * e.a)), inv_b2(1 / (e.b * e.b)) {}

  double implicit(double x, double y) const {
    const double dx = x - cx, dy = y - cy;
    const double u = dx * c + dy * s, v = -dx * s + dy * c;
    return u * u * inv_a2 + v * v * inv_b2;
  }

  // Inside the same ellipse translated down by `offset`.
  bool in_shifted(double x, double y, double offset) const { return implicit(x, y - offset) <= 1; }
};

struct Polyline {
  std::vector<Point2d> vertices;
  double level;
  Rect<double> bounds;  // expanded by the half width
};

double segment_distance_sq(const Point2d& p, const Point2d& a, const Point2d& b) {
  const Point2d ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).squaredNorm();
}

Rect<double> polyline_bounds(const std::vector<Point2d>& vertices) {
  Rect<double> r{vertices[0].x(), vertices[0].y(), vertices[0].x(), vertices[0].y()};
  for (const auto& v : vertices) {
    r.x_min = std::min(r.x_min, v.x());
    r.y_min = std::min(r.y_min, v.y());
    r.x_max = std::max(r.x_max, v.x());
    r.y_max = std::max(r.y_max, v.y());
  }
  return {r.x_min - kLineHalfWidth, r.y_min - kLineHalfWidth, r.x_max + kLineHalfWidth,
          r.y_max + kLineHalfWidth};
}

// Random walk with turns of 40..140 degrees, staying inside `region`.
std::vector<Point2d> jagged_polyline(Random& rng, const Ellipsed& region) {
  const Frame frame(region);
  const auto inside = [&](const Point2d& p) { return frame.implicit(p.x(), p.y()) <= 1; };
  for (int attempt = 0; attempt < 50; ++attempt) {
    Point2d start;
    do {
      start = {rng.uniform(region.cx - region.a, region.cx + region.a),
               rng.uniform(region.cy - region.a, region.cy + region.a)};
    } while (!inside(start));

    std::vector<Point2d> vertices{start};
    double heading = rng.uniform(0, 2 * std::numbers::pi);
    const int segments = rng.integer(4, 7);
    for (int k = 0; k < segments; ++k) {
      bool placed = false;
      for (int tries = 0; tries < 30 && !placed; ++tries) {
        double h = heading;
        if (k > 0) {
          const double turn = rng.uniform(40, 140) * std::numbers::pi / 180;
          h += rng.coin() ? turn : -turn;
        }
        const double length = rng.uniform(14, 24);
        const Point2d next = vertices.back() + length * Point2d(std::cos(h), std::sin(h));
        if (inside(next)) {
          vertices.push_back(next);
          heading = h;
          placed = true;
        }
      }
      if (!placed) break;
    }
    if (vertices.size() >= 3) return vertices;
  }
  return {};
}

void check_inside_canvas(const Rect<double>& r, const SceneSpec& spec, std::size_t index) {
  if (r.x_min < kMargin || r.y_min < kMargin || r.x_max > spec.width - 1 - kMargin ||
      r.y_max > spec.height - 1 - kMargin) {
    throw SpecInfeasible("ellipse " + std::to_string(index) + " exceeds the canvas margin");
  }
}

}  // namespace

double second_rim_offset(const Ellipsed& e) { return 0.5 * half_extent(e).hy; }

Scene generate_scene(const SceneSpec& spec) {
  if (spec.width < 16 || spec.height < 16) throw SpecInfeasible("canvas too small");
  Random rng(spec.seed);
  Scene scene;
  scene.truth.image_id = spec.image_id;
  scene.detections.image_id = spec.image_id;

  std::vector<Frame> frames, strokes;
  std::vector<double> offsets;
  std::vector<Polyline> polylines;

  for (std::size_t i = 0; i < spec.ellipses.size(); ++i) {
    const Ellipsed& e = spec.ellipses[i].ellipse;
    if (!e.is_valid()) throw SpecInfeasible("ellipse " + std::to_string(i) + " is invalid");
    const Extent ext = half_extent(e);
    const double offset = spec.second_rim ? second_rim_offset(e) : 0.0;
    const Rect<double> bounds{e.cx - ext.hx, e.cy - ext.hy, e.cx + ext.hx, e.cy + ext.hy + offset};
    check_inside_canvas(bounds, spec, i);

    frames.emplace_back(e);
    offsets.push_back(offset);
    const double inner_a = std::max(e.a - kStrokeWidth, 1.0), inner_b = std::max(e.b - kStrokeWidth, 1.0);
    strokes.emplace_back(Ellipsed{e.cx, e.cy, inner_a, inner_b, e.theta});

    scene.truth.ellipses.push_back(e);
    scene.detections.plates.push_back({spec.second_rim ? Label::bowl : Label::plate,
                                       bounds.x_min - kBoxPadding, bounds.y_min - kBoxPadding,
                                       bounds.x_max + kBoxPadding, e.cy + ext.hy + kBoxPadding,
                                       kPlateScore});

    const Ellipsed region{e.cx, e.cy, e.a * kFoodRegionScale, e.b * kFoodRegionScale, e.theta};
    std::vector<Point2d> all;
    for (int k = 0; k < spec.clutter; ++k) {
      auto vertices = jagged_polyline(rng, region);
      if (vertices.empty()) continue;
      all.insert(all.end(), vertices.begin(), vertices.end());
      const Rect<double> pb = polyline_bounds(vertices);
      polylines.push_back({std::move(vertices), kClutterOnFill, pb});
    }
    if (!all.empty()) {
      const Rect<double> fb = polyline_bounds(all);
      scene.detections.foods.push_back({Label::food, fb.x_min, fb.y_min, fb.x_max, fb.y_max, kFoodScore});
    }
  }

  if (spec.ellipses.empty() && spec.clutter > 0) {
    // Food piles on a bare table: one or two regions.
    const int regions = std::min(spec.clutter, rng.integer(1, 2));
    const double radius = 45;
    for (int r = 0; r < regions; ++r) {
      const Ellipsed region{rng.uniform(radius + 20, spec.width - radius - 20),
                            rng.uniform(radius + 20, spec.height - radius - 20), radius, radius, 0};
      const int count = spec.clutter / regions + (r < spec.clutter % regions ? 1 : 0);
      std::vector<Point2d> all;
      for (int k = 0; k < count; ++k) {
        auto vertices = jagged_polyline(rng, region);
        if (vertices.empty()) continue;
        all.insert(all.end(), vertices.begin(), vertices.end());
        const Rect<double> pb = polyline_bounds(vertices);
        polylines.push_back({std::move(vertices), kClutterOnBackground, pb});
      }
      if (!all.empty()) {
        const Rect<double> fb = polyline_bounds(all);
        scene.detections.foods.push_back({Label::food, fb.x_min, fb.y_min, fb.x_max, fb.y_max, kFoodScore});
      }
    }
  }

  const auto intensity = [&](double x, double y) {
    double v = spec.background;
    for (std::size_t i = 0; i < frames.size(); ++i) {
      if (offsets[i] > 0 && frames[i].in_shifted(x, y, offsets[i])) v = kBodyLevel;
    }
    for (std::size_t i = 0; i < frames.size(); ++i) {
      if (frames[i].implicit(x, y) <= 1) {
        const auto& se = spec.ellipses[i];
        v = se.fill;
        if (se.stroke > 0 && strokes[i].implicit(x, y) > 1) v = std::min(1.0, se.fill + se.stroke);
      }
    }
    const Point2d p(x, y);
    for (const auto& line : polylines) {
      if (!line.bounds.contains(p)) continue;
      for (std::size_t k = 0; k + 1 < line.vertices.size(); ++k) {
        if (segment_distance_sq(p, line.vertices[k], line.vertices[k + 1]) <= kLineHalfWidth * kLineHalfWidth) {
          v = line.level;
          break;
        }
      }
    }
    return v;
  };

  scene.image = RgbImage(spec.width, spec.height);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      double acc = 0;
      for (int sy = 0; sy < kSuper; ++sy) {
        for (int sx = 0; sx < kSuper; ++sx) {
          acc += intensity(x - 0.5 + (sx + 0.5) / kSuper, y - 0.5 + (sy + 0.5) / kSuper);
        }
      }
      const auto level = static_cast<std::uint8_t>(std::lround(std::clamp(acc / (kSuper * kSuper), 0.0, 1.0) * 255));
      scene.image.set(x, y, level, level, level);
    }
  }
  return scene;
}

nlohmann::json scene_spec_to_json(const SceneSpec& spec) {
  nlohmann::json ellipses = nlohmann::json::array();
  for (const auto& se : spec.ellipses) {
    nlohmann::json j = ellipse_to_json(se.ellipse);
    j["fill"] = se.fill;
    j["stroke"] = se.stroke;
    ellipses.push_back(j);
  }
  return {{"image_id", spec.image_id}, {"width", spec.width},           {"height", spec.height},
          {"seed", spec.seed},         {"clutter", spec.clutter},       {"second_rim", spec.second_rim},
          {"background", spec.background}, {"ellipses", ellipses}};
}

SceneSpec scene_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaViolation("scene spec must be an object");
  SceneSpec spec;
  try {
    spec.image_id = j.value("image_id", spec.image_id);
    spec.width = j.value("width", spec.width);
    spec.height = j.value("height", spec.height);
    spec.seed = j.value("seed", spec.seed);
    spec.clutter = j.value("clutter", spec.clutter);
    spec.second_rim = j.value("second_rim", spec.second_rim);
    spec.background = j.value("background", spec.background);
    if (j.contains("ellipses")) {
      for (const auto& item : j.at("ellipses")) {
        SceneEllipse se;
        se.ellipse = ellipse_from_json(item);
        se.fill = item.value("fill", se.fill);
        se.stroke = item.value("stroke", se.stroke);
        spec.ellipses.push_back(se);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaViolation(std::string("scene spec: ") + e.what());
  }
  return spec;
}

std::vector<SceneSpec> load_scene_specs(const std::filesystem::path& path) {
  const nlohmann::json doc = read_json(path);
  const nlohmann::json& list = doc.is_object() && doc.contains("scenes") ? doc["scenes"] : doc;
  if (!list.is_array()) throw ParseError(path.string() + ": expected a list of scenes");
  std::vector<SceneSpec> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    try {
      out.push_back(scene_spec_from_json(list[i]));
    } catch (const SchemaViolation& e) {
      throw ParseError(path.string() + ": scene " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

void write_scene_specs(const std::vector<SceneSpec>& specs, const std::filesystem::path& path) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& s : specs) list.push_back(scene_spec_to_json(s));
  write_json({{"scenes", list}}, path);
}

std::vector<SceneSpec> random_scene_specs(std::uint64_t seed, int count, const CorpusOptions& options) {
  std::vector<SceneSpec> out;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t scene_seed = splitmix64(seed * 0x100000001b3ULL + static_cast<std::uint64_t>(i));
    Random rng(scene_seed);
    SceneSpec spec;
    char name[32];
    std::snprintf(name, sizeof name, "scene_%03d", i);
    spec.image_id = name;
    spec.seed = splitmix64(scene_seed);
    spec.width = options.width;
    spec.height = options.height;
    spec.background = rng.uniform(0.05, 0.2);
    spec.clutter = rng.integer(options.min_clutter, options.max_clutter);
    if (options.clutter_only) {
      out.push_back(spec);
      continue;
    }
    spec.second_rim = options.alternate_second_rim && i % 2 == 1;

    const int rims = rng.integer(options.min_rims, options.max_rims);
    for (int r = 0; r < rims; ++r) {
      // Scale to the canvas; the b/a floor keeps the tightest curvature
      // radius b^2/a above kMinCurvatureRadius.
      const double unit = std::min(spec.width / 1024.0, spec.height / 768.0);
      const double a = unit * (rims == 1 ? rng.uniform(160, 230) : rng.uniform(140, 190));
      const double floor_ratio = std::max(0.55, std::sqrt(std::min(1.0, unit * kMinCurvatureRadius / a)));
      const double b = a * rng.uniform(floor_ratio, 1.0);
      const double theta = rng.uniform(0, std::numbers::pi);
      Ellipsed e = Ellipsed::normalized(0, 0, a, b, theta);
      const Extent ext = half_extent(e);
      const double slot = rims == 1 ? spec.width / 2.0 : spec.width * (r == 0 ? 0.25 : 0.75);
      e.cx = slot + rng.uniform(-10, 10);
      const double below = spec.second_rim ? ext.hy + second_rim_offset(e) : ext.hy;
      e.cy = rng.uniform(10 + ext.hy, spec.height - 11 - below);
      spec.ellipses.push_back({e, rng.uniform(0.75, 0.95), 0.0});
    }
    out.push_back(spec);
  }
  return out;
}

}  // namespace rimfit
