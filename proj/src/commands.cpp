#include "rimfit/commands.hpp"

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <ostream>
#include <thread>

#include "rimfit/errors.hpp"
#include "rimfit/evaluation.hpp"
#include "rimfit/pipeline.hpp"
#include "rimfit/synthetic.hpp"

namespace fs = std::filesystem;

namespace rimfit {

Config resolve_config(const std::optional<fs::path>& explicit_path) {
  if (explicit_path) return load_config(*explicit_path);
  if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') {
    return load_config(env);
  }
  return Config{};
}

std::vector<fs::path> expand_images(const std::vector<std::string>& patterns) {
  std::vector<fs::path> out;
  for (const auto& pattern : patterns) {
    if (pattern.find_first_of("*?[") == std::string::npos) {
      out.emplace_back(pattern);
      continue;
    }
    glob_t matches{};
    if (glob(pattern.c_str(), 0, nullptr, &matches) == 0) {
      for (std::size_t i = 0; i < matches.gl_pathc; ++i) out.emplace_back(matches.gl_pathv[i]);
    }
    globfree(&matches);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RgbImage render_overlay(const RgbImage& image, const std::vector<Ellipsed>& predictions,
                        const std::vector<Ellipsed>& truth) {
  RgbImage out = image;
  const auto draw = [&](const Ellipsed& e, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const int n = std::max(360, static_cast<int>(8 * e.a));
    const Points2d pts = sample_ellipse(e, n);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      const int x = static_cast<int>(std::lround(pts(i, 0)));
      const int y = static_cast<int>(std::lround(pts(i, 1)));
      out.set(x, y, r, g, b);
      out.set(x + 1, y, r, g, b);
      out.set(x, y + 1, r, g, b);
    }
  };
  for (const auto& e : truth) draw(e, 0, 255, 0);
  for (const auto& e : predictions) draw(e, 255, 0, 0);
  return out;
}

namespace {

struct ImageStatus {
  int code = kExitOk;
  std::string message;
};

}  // namespace

int cmd_fit(const FitOptions& options, std::ostream& log) {
  Config config;
  std::map<std::string, std::vector<Ellipsed>> truth;
  try {
    config = resolve_config(options.config);
    if (options.gt) {
      for (auto& g : load_ground_truth(*options.gt)) truth[g.image_id] = std::move(g.ellipses);
    }
    fs::create_directories(options.out_dir);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    return kExitIoError;
  }

  const std::vector<fs::path> images = expand_images(options.images);
  std::vector<ImageStatus> status(images.size());

  const auto process = [&](std::size_t index) {
    const fs::path& path = images[index];
    const std::string image_id = path.stem().string();
    ImageStatus& st = status[index];

    RgbImage rgb;
    try {
      rgb = read_image(path);
    } catch (const Error& e) {
      st = {kExitIoError, std::string("cannot read image ") + path.string() + ": " + e.what()};
      return;
    }

    std::optional<SceneDetections> detections;
    if (!options.no_detections) {
      const fs::path det_path = options.detections_dir / (image_id + ".json");
      if (!fs::exists(det_path)) {
        st = {kExitDataError, "missing detections for " + image_id + " (" + det_path.string() + ")"};
        return;
      }
      try {
        detections = load_detections(det_path, config.detector_floor);
      } catch (const Error& e) {
        st = {kExitDataError, e.what()};
        return;
      }
    }

    try {
      const auto candidates = run_pipeline(to_gray(rgb), detections, config);
      Prediction prediction{image_id, {}};
      for (const auto& c : candidates) prediction.ellipses.push_back(c.ellipse);
      write_prediction(prediction, options.out_dir / (image_id + ".json"));
      if (options.overlay) {
        const auto it = truth.find(image_id);
        const std::vector<Ellipsed> none;
        write_png(render_overlay(rgb, prediction.ellipses, it == truth.end() ? none : it->second),
                  options.out_dir / (image_id + "_overlay.png"));
      }
    } catch (const Error& e) {
      st = {kExitIoError, image_id + ": " + e.what()};
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(options.jobs, 1)), 1,
                                                      std::max<std::size_t>(images.size(), 1));
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < images.size(); i = next++) process(i);
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  int code = kExitOk;
  for (const auto& st : status) {
    if (st.code == kExitOk) continue;
    log << (options.strict ? "error: " : "warning: ") << st.message << '\n';
    if (options.strict) code = std::max(code, st.code);
  }
  return code;
}

int cmd_eval(const EvalOptions& options, std::ostream& out, std::ostream& log) {
  std::vector<Method> methods;
  if (options.method == "A" || options.method == "a") methods = {Method::A};
  else if (options.method == "B" || options.method == "b") methods = {Method::B};
  else if (options.method == "both") methods = {Method::A, Method::B};
  else {
    log << "error: unknown method '" << options.method << "' (expected A, B or both)\n";
    return kExitIoError;
  }

  try {
    const Config config = resolve_config(options.config);
    const auto gts = load_ground_truth(options.gt);
    const auto preds = load_prediction_dir(options.preds_dir);
    nlohmann::json reports = nlohmann::json::array();
    for (Method m : methods) {
      const EvalReport report = evaluate(m, gts, preds, config.n_samples, config.chamfer_normalized);
      out << format_report_row(report) << '\n';
      reports.push_back(report_to_json(report));
    }
    if (options.out) write_json(reports, *options.out);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitIoError;
  }
  return kExitOk;
}

int cmd_synth(const SynthOptions& options, std::ostream& log) {
  std::vector<SceneSpec> specs;
  try {
    if (options.spec) {
      specs = load_scene_specs(*options.spec);
    } else {
      CorpusOptions corpus;
      corpus.clutter_only = options.clutter_only;
      specs = random_scene_specs(options.seed, options.random_count, corpus);
    }
    fs::create_directories(options.out_dir / "images");
    fs::create_directories(options.out_dir / "detections");
    fs::create_directories(options.out_dir / "gt");
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    return kExitIoError;
  }

  std::vector<GroundTruth> truth;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    try {
      const Scene scene = generate_scene(specs[i]);
      const std::string& id = specs[i].image_id;
      write_png(scene.image, options.out_dir / "images" / (id + ".png"));
      write_detections(scene.detections, options.out_dir / "detections" / (id + ".json"));
      write_json(image_ellipses_to_json(scene.truth), options.out_dir / "gt" / (id + ".json"));
      truth.push_back(scene.truth);
    } catch (const Error& e) {
      log << "error: scene " << i << " (" << specs[i].image_id << "): " << e.what() << '\n';
      return kExitIoError;
    }
  }
  try {
    write_ground_truth(truth, options.out_dir / "ground_truth.json");
    write_scene_specs(specs, options.out_dir / "scenes.json");
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitIoError;
  }
  return kExitOk;
}

}  // namespace rimfit
