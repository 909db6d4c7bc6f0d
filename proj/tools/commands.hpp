#pragma once

#include <string>
#include <vector>

#include "run_config.hpp"

namespace gapflight {

int cmd_train(const RunConfig& cfg);
int cmd_eval(const RunConfig& cfg);
int cmd_transfer_eval(const RunConfig& cfg);
int cmd_detect(const RunConfig& cfg);
int cmd_render(const RunConfig& cfg);

// One evaluation trial within a sweep bin.
struct TrialRecord {
  double phi_g = 0.0;  // [rad]
  int trial = 0;
  bool success = false;
  bool crossed = false;
  double dy = 0.0, dz = 0.0;          // gap-frame center offset at crossing [m]
  double dphi = 0.0, dtheta = 0.0;    // attitude error at crossing [rad]
};

struct SweepReport {
  std::vector<double> bin_angles;  // [rad]
  std::vector<int> trials;
  std::vector<int> successes;
  std::vector<TrialRecord> records;

  double rate(size_t bin) const {
    return trials[bin] > 0 ? double(successes[bin]) / trials[bin] : 0.0;
  }
};

// Deterministic-policy roll sweep; trial (bin, k) runs on its own seed stream
// derived from cfg.seed, so the report is independent of evaluation order.
SweepReport run_sweep(const RunConfig& cfg, const SacState& sac);

// Transfer preset plant on top of the run's task geometry.
RunConfig overlay_transfer(const RunConfig& base);

// Summary statistics with linearly interpolated quantiles.
struct ChannelStats {
  double mean = 0.0, stddev = 0.0, q10 = 0.0, q95 = 0.0, mean_abs = 0.0;
  int n = 0;
};
ChannelStats channel_stats(std::vector<double> v);

void write_sweep_csv(const std::string& path, const SweepReport& rep);
void write_traversal_csv(const std::string& path, const SweepReport& rep);
void write_traversal_stats_csv(const std::string& path, const SweepReport& rep);

void write_manifest(const std::string& out_dir, const std::string& command,
                    const RunConfig& cfg, const std::vector<std::string>& outputs,
                    const std::vector<std::pair<std::string, double>>& summary = {});

}  // namespace gapflight
