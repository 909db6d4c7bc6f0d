#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"

namespace gapflight {

namespace {

// Per-episode metrics read back for curve normalization.
struct MetricsTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

MetricsTable read_metrics(const std::string& path) {
  MetricsTable t;
  std::ifstream in(path);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      if (header) {
        t.columns.push_back(cell);
      } else {
        row.push_back(std::stod(cell));
      }
    }
    if (!header) t.rows.push_back(std::move(row));
    header = false;
  }
  return t;
}

// Min-max normalization over the run, matching how the reward component
// curves are usually plotted next to each other.
std::vector<double> normalized(const MetricsTable& t, size_t col) {
  std::vector<double> v(t.rows.size());
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (size_t i = 0; i < t.rows.size(); ++i) {
    v[i] = t.rows[i][col];
    lo = std::min(lo, v[i]);
    hi = std::max(hi, v[i]);
  }
  const double span = hi - lo;
  for (double& x : v) x = span > 0.0 ? (x - lo) / span : 0.0;
  return v;
}

}  // namespace

int cmd_train(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  finalize_run_config(cfg);
  std::filesystem::create_directories(cfg.out_dir);

  GapEnv env(cfg.env, mix_seed(cfg.seed, 0x656e76));
  SacState sac = SacState::make(env.obs_dim(), env.act_dim(), cfg.sac, mix_seed(cfg.seed, 0x6e6574));
  Rng rng(mix_seed(cfg.seed, 0x6c6f6f70));

  const TrainResult res = train(env, sac, cfg.trainer, rng);

  // Fig-style normalized component curves + difficulty trace.
  const MetricsTable t = read_metrics(cfg.trainer.metrics_path);
  std::vector<std::string> outputs{"metrics.csv", "policy.ckpt", "manifest.json"};
  if (!t.rows.empty()) {
    const auto ret = normalized(t, 1);
    const auto rp = normalized(t, 2);
    const auto ra = normalized(t, 3);
    const auto ru = normalized(t, 4);
    CsvWriter curves(cfg.out_dir + "/curves.csv",
                     {"episode", "return_norm", "r_p_norm", "r_a_norm", "r_u_norm", "d_f"});
    for (size_t i = 0; i < t.rows.size(); ++i) {
      curves.write_row({t.rows[i][0], ret[i], rp[i], ra[i], ru[i], t.rows[i][6]});
    }
    outputs.push_back("curves.csv");
  }

  write_manifest(cfg.out_dir, "train", cfg, outputs,
                 {{"steps", double(res.steps)},
                  {"episodes", double(res.episodes)},
                  {"final_difficulty", res.final_difficulty},
                  {"rolling_success", res.rolling_success},
                  {"aborted", double(res.aborted)}});

  if (res.aborted) {
    std::fprintf(stderr, "training aborted after repeated non-finite updates; "
                         "partial artifacts kept in %s\n", cfg.out_dir.c_str());
    return 1;
  }
  return 0;
}

}  // namespace gapflight
