#include <cstdio>
#include <filesystem>

#include "commands.hpp"
#include "gapflight/checkpoint.hpp"

namespace gapflight {

int cmd_eval(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  finalize_run_config(cfg);
  if (cfg.checkpoint.empty()) {
    std::fprintf(stderr, "eval: --checkpoint is required\n");
    return 1;
  }
  std::filesystem::create_directories(cfg.out_dir);

  const SacState sac = load_checkpoint(cfg.checkpoint);
  const SweepReport rep = run_sweep(cfg, sac);

  write_sweep_csv(cfg.out_dir + "/sweep.csv", rep);
  write_traversal_csv(cfg.out_dir + "/traversal.csv", rep);
  write_traversal_stats_csv(cfg.out_dir + "/traversal_stats.csv", rep);

  int total = 0, ok = 0;
  for (size_t b = 0; b < rep.bin_angles.size(); ++b) {
    total += rep.trials[b];
    ok += rep.successes[b];
  }
  write_manifest(cfg.out_dir, "eval", cfg,
                 {"sweep.csv", "traversal.csv", "traversal_stats.csv", "manifest.json"},
                 {{"trials", double(total)},
                  {"successes", double(ok)},
                  {"overall_rate", total > 0 ? double(ok) / total : 0.0}});
  return 0;
}

// Transfer preset plant on top of the run's task geometry: what changes is
// the vehicle and command interface, not the gap being flown through.
RunConfig overlay_transfer(const RunConfig& base) {
  RunConfig out = base;
  const RunConfig preset = make_run_config(Domain::transfer);
  out.domain = Domain::transfer;
  out.env.nominal_params = preset.env.nominal_params;
  out.env.control_hz = preset.env.control_hz;
  out.env.physics_substeps = preset.env.physics_substeps;
  out.env.kappa = preset.env.kappa;
  return out;
}

int cmd_transfer_eval(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  finalize_run_config(cfg);
  if (cfg.checkpoint.empty()) {
    std::fprintf(stderr, "transfer-eval: --checkpoint is required\n");
    return 1;
  }
  std::filesystem::create_directories(cfg.out_dir);

  const SacState sac = load_checkpoint(cfg.checkpoint);

  const SweepReport rep_base = run_sweep(cfg, sac);
  const RunConfig tcfg = overlay_transfer(cfg);
  const SweepReport rep_transfer = run_sweep(tcfg, sac);

  write_sweep_csv(cfg.out_dir + "/sweep_training.csv", rep_base);
  write_sweep_csv(cfg.out_dir + "/sweep_transfer.csv", rep_transfer);
  write_traversal_stats_csv(cfg.out_dir + "/traversal_stats_training.csv", rep_base);
  write_traversal_stats_csv(cfg.out_dir + "/traversal_stats_transfer.csv", rep_transfer);

  CsvWriter side(cfg.out_dir + "/retention.csv",
                 {"phi_g_deg", "base_rate", "transfer_rate", "retention"});
  double worst = std::numeric_limits<double>::infinity();
  for (size_t b = 0; b < rep_base.bin_angles.size(); ++b) {
    const double rb = rep_base.rate(b);
    const double rt = rep_transfer.rate(b);
    // Bins where the base policy already fails put no constraint on transfer.
    const double retention = rb > 0.0 ? rt / rb : 1.0;
    if (rb > 0.0) worst = std::min(worst, retention);
    side.write_row({rad2deg(rep_base.bin_angles[b]), rb, rt, retention});
  }
  if (!std::isfinite(worst)) worst = 1.0;

  write_manifest(cfg.out_dir, "transfer-eval", cfg,
                 {"sweep_training.csv", "sweep_transfer.csv", "traversal_stats_training.csv",
                  "traversal_stats_transfer.csv", "retention.csv", "manifest.json"},
                 {{"worst_bin_retention", worst}});
  return 0;
}

}  // namespace gapflight
