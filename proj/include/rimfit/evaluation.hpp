#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rimfit/formats.hpp"
#include "rimfit/geometry.hpp"

namespace rimfit {

inline constexpr int kPerimeterSamples = 360;

/// Chamfer distance with Euclidean point distance. Normalized form is
/// 0.5 * (mean_a min_b d + mean_b min_a d); the unnormalized form uses
/// sums instead of means. Throws EmptySet if either set is empty.
double chamfer(const Points2d& a, const Points2d& b, bool normalized = true);

/// Chamfer distance between the sampled perimeters of two ellipses.
double ellipse_chamfer(const Ellipsed& a, const Ellipsed& b, int n_samples = kPerimeterSamples,
                       bool normalized = true);

/// One value per ground-truth ellipse: the distance to its nearest
/// prediction. Empty when there are no predictions.
std::vector<double> eval_method_a(const GroundTruth& gt, const std::vector<Ellipsed>& preds,
                                  int n_samples = kPerimeterSamples, bool normalized = true);

/// One value per prediction: the distance to its nearest ground-truth
/// ellipse. Empty when either side is empty.
std::vector<double> eval_method_b(const GroundTruth& gt, const std::vector<Ellipsed>& preds,
                                  int n_samples = kPerimeterSamples, bool normalized = true);

enum class Method { A, B };

const char* to_string(Method method);

struct EvalReport {
  Method method = Method::A;
  std::optional<double> mu;           ///< mean over all values
  std::optional<double> sigma;        ///< population standard deviation over all values
  std::optional<double> mu_per_image; ///< mean of the per-image means
  std::size_t n_images = 0;           ///< images contributing at least one value
  std::size_t n_values = 0;
  std::map<std::string, std::vector<double>> per_image;
};

EvalReport aggregate(Method method, const std::map<std::string, std::vector<double>>& values);

/// Runs one protocol over a corpus. Method A walks the ground truth and
/// looks up predictions by image id; method B walks the predictions.
EvalReport evaluate(Method method, const std::vector<GroundTruth>& gts,
                    const std::vector<Prediction>& preds, int n_samples = kPerimeterSamples,
                    bool normalized = true);

nlohmann::json report_to_json(const EvalReport& report);

/// One table row: method, mu, sigma, N.
std::string format_report_row(const EvalReport& report);

}  // namespace rimfit
