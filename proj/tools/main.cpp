#include <iostream>

#include <CLI11.hpp>

#include "rimfit/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Plate and bowl rim ellipse estimation"};
  app.require_subcommand(1);

  rimfit::FitOptions fit;
  std::string fit_config, fit_gt;
  auto* fit_cmd = app.add_subcommand("fit", "Detect rim ellipses in images");
  fit_cmd->add_option("images", fit.images, "Image paths or glob patterns")->required();
  fit_cmd->add_option("-d,--detections", fit.detections_dir, "Directory of <image_id>.json detection files");
  fit_cmd->add_option("-c,--config", fit_config, "Config file (default: $RIMFIT_CONFIG, then built-in)");
  fit_cmd->add_option("-o,--out", fit.out_dir, "Output directory")->required();
  fit_cmd->add_flag("--overlay", fit.overlay, "Also write <image_id>_overlay.png");
  fit_cmd->add_option("--gt", fit_gt, "Ground truth drawn in green on overlays");
  fit_cmd->add_flag("--no-detections", fit.no_detections, "Geometric-only mode");
  fit_cmd->add_flag("--strict", fit.strict, "Fail on unreadable images or missing detections");
  fit_cmd->add_option("-j,--jobs", fit.jobs, "Worker threads")->check(CLI::PositiveNumber);

  rimfit::EvalOptions eval;
  std::string eval_out, eval_config;
  auto* eval_cmd = app.add_subcommand("eval", "Chamfer evaluation against ground truth");
  eval_cmd->add_option("-p,--preds", eval.preds_dir, "Directory of prediction files")->required();
  eval_cmd->add_option("-g,--gt", eval.gt, "Ground truth file or directory")->required();
  eval_cmd->add_option("-m,--method", eval.method, "A, B or both")->capture_default_str();
  eval_cmd->add_option("-o,--out", eval_out, "Write the report as JSON");
  eval_cmd->add_option("-c,--config", eval_config, "Config file (n_samples, chamfer_normalized)");

  rimfit::SynthOptions synth;
  std::string synth_spec;
  auto* synth_cmd = app.add_subcommand("synth", "Render synthetic scenes with ground truth and detections");
  synth_cmd->add_option("-s,--spec", synth_spec, "Scene spec file");
  synth_cmd->add_option("-o,--out", synth.out_dir, "Output directory")->required();
  synth_cmd->add_option("--random", synth.random_count, "Generate this many random scenes instead of --spec");
  synth_cmd->add_option("--seed", synth.seed, "Seed for --random");
  synth_cmd->add_flag("--clutter-only", synth.clutter_only, "Random scenes without rims");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : rimfit::kExitIoError;
  }

  if (*fit_cmd) {
    if (!fit_config.empty()) fit.config = fit_config;
    if (!fit_gt.empty()) fit.gt = fit_gt;
    if (!fit.no_detections && fit.detections_dir.empty()) {
      std::cerr << "error: --detections is required unless --no-detections is given\n";
      return rimfit::kExitIoError;
    }
    return rimfit::cmd_fit(fit, std::cerr);
  }
  if (*eval_cmd) {
    if (!eval_out.empty()) eval.out = eval_out;
    if (!eval_config.empty()) eval.config = eval_config;
    return rimfit::cmd_eval(eval, std::cout, std::cerr);
  }
  if (synth_spec.empty() && synth.random_count <= 0) {
    std::cerr << "error: synth needs --spec or --random N\n";
    return rimfit::kExitIoError;
  }
  if (!synth_spec.empty()) synth.spec = synth_spec;
  return rimfit::cmd_synth(synth, std::cerr);
}
