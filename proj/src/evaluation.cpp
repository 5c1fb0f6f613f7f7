#include "rimfit/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "rimfit/errors.hpp"

namespace rimfit {

namespace {

double directed_sum(const Points2d& from, const Points2d& to) {
  double sum = 0;
  for (Eigen::Index i = 0; i < from.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < to.rows(); ++j) {
      const double dx = from(i, 0) - to(j, 0);
      const double dy = from(i, 1) - to(j, 1);
      best = std::min(best, dx * dx + dy * dy);
    }
    sum += std::sqrt(best);
  }
  return sum;
}

}  // namespace

double chamfer(const Points2d& a, const Points2d& b, bool normalized) {
  if (a.rows() == 0 || b.rows() == 0) throw EmptySet("chamfer of an empty point set");
  const double ab = directed_sum(a, b);
  const double ba = directed_sum(b, a);
  if (normalized) {
    return 0.5 * (ab / static_cast<double>(a.rows()) + ba / static_cast<double>(b.rows()));
  }
  return 0.5 * (ab + ba);
}

double ellipse_chamfer(const Ellipsed& a, const Ellipsed& b, int n_samples, bool normalized) {
  return chamfer(sample_ellipse(a, n_samples), sample_ellipse(b, n_samples), normalized);
}

namespace {

std::vector<double> nearest_values(const std::vector<Ellipsed>& from, const std::vector<Ellipsed>& to,
                                   int n_samples, bool normalized) {
  std::vector<double> out;
  if (from.empty() || to.empty()) return out;
  std::vector<Points2d> targets;
  targets.reserve(to.size());
  for (const auto& e : to) targets.push_back(sample_ellipse(e, n_samples));
  for (const auto& e : from) {
    const Points2d source = sample_ellipse(e, n_samples);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : targets) best = std::min(best, chamfer(source, t, normalized));
    out.push_back(best);
  }
  return out;
}

}  // namespace

std::vector<double> eval_method_a(const GroundTruth& gt, const std::vector<Ellipsed>& preds,
                                  int n_samples, bool normalized) {
  return nearest_values(gt.ellipses, preds, n_samples, normalized);
}

std::vector<double> eval_method_b(const GroundTruth& gt, const std::vector<Ellipsed>& preds,
                                  int n_samples, bool normalized) {
  return nearest_values(preds, gt.ellipses, n_samples, normalized);
}

const char* to_string(Method method) { return method == Method::A ? "A" : "B"; }

EvalReport aggregate(Method method, const std::map<std::string, std::vector<double>>& values) {
  EvalReport report;
  report.method = method;
  double sum = 0, per_image_sum = 0;
  for (const auto& [id, list] : values) {
    if (list.empty()) continue;
    report.per_image[id] = list;
    ++report.n_images;
    double image_sum = 0;
    for (double v : list) image_sum += v;
    sum += image_sum;
    per_image_sum += image_sum / static_cast<double>(list.size());
    report.n_values += list.size();
  }
  if (report.n_values == 0) return report;

  const double mu = sum / static_cast<double>(report.n_values);
  double squares = 0;
  for (const auto& [id, list] : report.per_image) {
    for (double v : list) squares += (v - mu) * (v - mu);
  }
  report.mu = mu;
  report.sigma = std::sqrt(squares / static_cast<double>(report.n_values));
  report.mu_per_image = per_image_sum / static_cast<double>(report.n_images);
  return report;
}

EvalReport evaluate(Method method, const std::vector<GroundTruth>& gts,
                    const std::vector<Prediction>& preds, int n_samples, bool normalized) {
  std::map<std::string, const GroundTruth*> gt_by_id;
  for (const auto& g : gts) gt_by_id[g.image_id] = &g;
  std::map<std::string, const Prediction*> pred_by_id;
  for (const auto& p : preds) pred_by_id[p.image_id] = &p;

  std::map<std::string, std::vector<double>> values;
  if (method == Method::A) {
    for (const auto& g : gts) {
      const auto it = pred_by_id.find(g.image_id);
      if (it == pred_by_id.end()) continue;
      values[g.image_id] = eval_method_a(g, it->second->ellipses, n_samples, normalized);
    }
  } else {
    for (const auto& p : preds) {
      const auto it = gt_by_id.find(p.image_id);
      if (it == gt_by_id.end()) continue;
      values[p.image_id] = eval_method_b(*it->second, p.ellipses, n_samples, normalized);
    }
  }
  return aggregate(method, values);
}

nlohmann::json report_to_json(const EvalReport& report) {
  const auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::json per_image = nlohmann::json::array();
  for (const auto& [id, list] : report.per_image) {
    per_image.push_back({{"image_id", id}, {"values", list}});
  }
  return {{"method", to_string(report.method)},
          {"mu", opt(report.mu)},
          {"sigma", opt(report.sigma)},
          {"n_images", report.n_images},
          {"n_values", report.n_values},
          {"mu_per_image", opt(report.mu_per_image)},
          {"per_image", per_image}};
}

std::string format_report_row(const EvalReport& report) {
  char buffer[160];
  if (report.mu) {
    std::snprintf(buffer, sizeof buffer, "method %s  mu %8.3f  sigma %8.3f  N %zu",
                  to_string(report.method), *report.mu, *report.sigma, report.n_images);
  } else {
    std::snprintf(buffer, sizeof buffer, "method %s  mu        -  sigma        -  N %zu",
                  to_string(report.method), report.n_images);
  }
  return buffer;
}

}  // namespace rimfit
