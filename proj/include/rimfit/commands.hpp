#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rimfit/config.hpp"
#include "rimfit/formats.hpp"
#include "rimfit/image.hpp"

namespace rimfit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIoError = 1;
inline constexpr int kExitDataError = 2;

/// --config beats the RIMFIT_CONFIG environment variable, which beats the
/// built-in defaults.
Config resolve_config(const std::optional<std::filesystem::path>& explicit_path);

/// Expands shell-style patterns; plain paths pass through. Sorted, unique.
std::vector<std::filesystem::path> expand_images(const std::vector<std::string>& patterns);

/// Draws sampled perimeters onto a copy of `image`: predictions red,
/// ground truth green.
RgbImage render_overlay(const RgbImage& image, const std::vector<Ellipsed>& predictions,
                        const std::vector<Ellipsed>& truth);

struct FitOptions {
  std::vector<std::string> images;
  std::filesystem::path detections_dir;
  std::optional<std::filesystem::path> config;
  std::filesystem::path out_dir;
  bool overlay = false;
  std::optional<std::filesystem::path> gt;
  bool no_detections = false;
  bool strict = false;
  int jobs = 1;
};

/// Writes <out>/<image_id>.json per processed image (and
/// <image_id>_overlay.png with --overlay).
int cmd_fit(const FitOptions& options, std::ostream& log);

struct EvalOptions {
  std::filesystem::path preds_dir;
  std::filesystem::path gt;
  std::string method = "both";
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> config;
};

int cmd_eval(const EvalOptions& options, std::ostream& out, std::ostream& log);

struct SynthOptions {
  std::optional<std::filesystem::path> spec;
  std::filesystem::path out_dir;
  int random_count = 0;
  std::uint64_t seed = 0;
  bool clutter_only = false;
};

/// Writes images/, detections/, gt/ (one file per scene), ground_truth.json
/// and scenes.json under out_dir.
int cmd_synth(const SynthOptions& options, std::ostream& log);

}  // namespace rimfit
