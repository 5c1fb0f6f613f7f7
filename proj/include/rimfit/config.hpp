#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "rimfit/contours.hpp"
#include "rimfit/detections.hpp"
#include "rimfit/evaluation.hpp"

namespace rimfit {

struct CannySettings {
  double sigma = 2.5;
  double low_quantile = 0.7;
  double high_quantile = 0.9;

  friend bool operator==(const CannySettings&, const CannySettings&) = default;
};

/// Everything a run needs. Defaults reproduce hyperparameter set A.
struct Config {
  HyperParams hp;
  CannySettings canny;
  double detector_floor = kDefaultDetectorFloor;
  bool strict_containment = false;
  bool squared_chord = false;
  bool squared_food_distance = false;
  bool chamfer_normalized = true;
  int n_samples = kPerimeterSamples;

  /// Throws BadConfig on out-of-range values.
  void validate() const;

  friend bool operator==(const Config&, const Config&) = default;
};

/// Environment variable naming a config file, used when none is given.
inline constexpr const char* kConfigEnvVar = "RIMFIT_CONFIG";

/// Parses flat "key = value" text. '#' starts a comment. Unknown keys,
/// duplicate keys and malformed values throw BadConfig. Missing keys keep
/// their defaults.
Config parse_config(std::string_view text);
Config load_config(const std::filesystem::path& path);

/// Every key, one per line, with shortest round-trip number formatting.
std::string format_config(const Config& config);
void save_config(const Config& config, const std::filesystem::path& path);

}  // namespace rimfit
