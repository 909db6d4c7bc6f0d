#include <cstdio>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace gapflight;

int main(int argc, char** argv) {
  CLI::App app{"agile flight through tilted narrow gaps: training, evaluation, perception"};
  app.require_subcommand(1);

  std::string config_path, domain_str, out_dir, checkpoint, detect_input;
  std::int64_t seed = -1;
  long steps = -1;
  int trials = -1, render_count = -1;
  double render_noise = -1.0;
  bool att_reward_off = false, att_augment_off = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "TOML run configuration");
    sub->add_option("--domain", domain_str, "training|transfer|experiment (preset when no config)");
    sub->add_option("--seed", seed, "root RNG seed");
    sub->add_option("--out", out_dir, "output directory");
  };

  CLI::App* trainc = app.add_subcommand("train", "train a traversal policy with the curriculum");
  add_common(trainc);
  trainc->add_option("--steps", steps, "total environment steps");
  trainc->add_flag("--attitude-reward-off", att_reward_off, "ablation: zero the attitude reward");
  trainc->add_flag("--attitude-augment-off", att_augment_off,
                   "ablation: disable gap attitude amplitude scaling");

  CLI::App* evalc = app.add_subcommand("eval", "roll sweep with a deterministic policy");
  add_common(evalc);
  evalc->add_option("--checkpoint", checkpoint, "policy checkpoint")->required();
  evalc->add_option("--trials", trials, "trials per roll bin");

  CLI::App* transc = app.add_subcommand("transfer-eval", "same sweep in base and transfer plants");
  add_common(transc);
  transc->add_option("--checkpoint", checkpoint, "policy checkpoint")->required();
  transc->add_option("--trials", trials, "trials per roll bin");

  CLI::App* detc = app.add_subcommand("detect", "run gap detection over rendered frames");
  add_common(detc);
  detc->add_option("--dir", detect_input, "frame directory or single .pgm")->required();

  CLI::App* rendc = app.add_subcommand("render", "write synthetic gap fixtures");
  add_common(rendc);
  rendc->add_option("--count", render_count, "number of fixtures");
  rendc->add_option("--noise", render_noise, "relative depth noise std");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = config_path.empty()
                        ? make_run_config(domain_str.empty() ? Domain::training
                                                             : domain_from_string(domain_str))
                        : load_run_config(config_path);
    if (!config_path.empty() && !domain_str.empty()) {
      std::fprintf(stderr, "note: --domain ignored, config file sets the domain\n");
    }
    if (seed >= 0) cfg.seed = std::uint64_t(seed);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!checkpoint.empty()) cfg.checkpoint = checkpoint;
    if (steps > 0) cfg.trainer.total_steps = steps;
    if (trials > 0) cfg.trials_per_angle = trials;
    if (render_count >= 0) cfg.render.count = render_count;
    if (render_noise >= 0.0) cfg.render.depth_noise_rel = render_noise;
    if (!detect_input.empty()) cfg.detect_dir = detect_input;
    cfg.attitude_reward_off = cfg.attitude_reward_off || att_reward_off;
    cfg.attitude_augment_off = cfg.attitude_augment_off || att_augment_off;

    if (trainc->parsed()) return cmd_train(cfg);
    if (evalc->parsed()) return cmd_eval(cfg);
    if (transc->parsed()) return cmd_transfer_eval(cfg);
    if (detc->parsed()) return cmd_detect(cfg);
    if (rendc->parsed()) return cmd_render(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
