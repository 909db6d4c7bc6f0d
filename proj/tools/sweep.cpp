#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "commands.hpp"
#include "json.hpp"

namespace gapflight {

namespace {

TrialRecord run_trial(const RunConfig& cfg, const SacState& sac, double phi_g,
                      int bin_idx, int trial) {
  GapEnvConfig ec = cfg.env;
  ec.training_mode = false;
  ec.episode.difficulty = 1.0;  // evaluate at goal dimensions
  ec.episode.aggressive_bias = 0.0;

  GapEnv env(ec, mix_seed(cfg.seed, std::uint64_t(bin_idx), std::uint64_t(trial)));
  env.override_roll(phi_g);
  VecX obs = env.reset();

  for (long step = 0; step < cfg.eval_episode_cap; ++step) {
    const ActionSample a = sample_action(sac.actor, obs, sac.hp, nullptr);
    const EnvStep out = env.step(a.action);
    obs = out.obs;
    if (out.done) break;
  }

  TrialRecord rec;
  rec.phi_g = phi_g;
  rec.trial = trial;
  rec.success = env.verdict() == Verdict::success;
  rec.crossed = env.crossed();
  if (rec.crossed) {
    const QuadState& xs = env.crossing_state();
    const Vec3 q = env.gap().rot.transpose() * (xs.p - env.gap().center);
    rec.dy = q.y();
    rec.dz = q.z();
    const EulerZyx e = euler_from_rotation(xs.R);
    rec.dphi = wrap_pi(env.gap().roll() - e.phi);
    rec.dtheta = e.theta;
  }
  return rec;
}

}  // namespace

SweepReport run_sweep(const RunConfig& cfg, const SacState& sac) {
  SweepReport rep;
  const int n_side = int(std::lround(cfg.sweep_max_deg / cfg.sweep_step_deg));
  for (int b = -n_side; b <= n_side; ++b) {
    rep.bin_angles.push_back(deg2rad(b * cfg.sweep_step_deg));
  }
  rep.trials.assign(rep.bin_angles.size(), 0);
  rep.successes.assign(rep.bin_angles.size(), 0);

  for (size_t bin = 0; bin < rep.bin_angles.size(); ++bin) {
    for (int k = 0; k < cfg.trials_per_angle; ++k) {
      const TrialRecord rec = run_trial(cfg, sac, rep.bin_angles[bin], int(bin), k);
      rep.trials[bin]++;
      if (rec.success) rep.successes[bin]++;
      rep.records.push_back(rec);
    }
  }
  return rep;
}

ChannelStats channel_stats(std::vector<double> v) {
  ChannelStats st;
  st.n = int(v.size());
  if (v.empty()) return st;
  double sum = 0.0, sum_abs = 0.0;
  for (double x : v) {
    sum += x;
    sum_abs += std::abs(x);
  }
  st.mean = sum / st.n;
  st.mean_abs = sum_abs / st.n;
  double ss = 0.0;
  for (double x : v) ss += (x - st.mean) * (x - st.mean);
  st.stddev = st.n > 1 ? std::sqrt(ss / (st.n - 1)) : 0.0;

  std::sort(v.begin(), v.end());
  auto quantile = [&](double q) {
    const double pos = q * (v.size() - 1);
    const size_t lo = size_t(pos);
    const double frac = pos - lo;
    return lo + 1 < v.size() ? v[lo] * (1.0 - frac) + v[lo + 1] * frac : v[lo];
  };
  st.q10 = quantile(0.10);
  st.q95 = quantile(0.95);
  return st;
}

void write_sweep_csv(const std::string& path, const SweepReport& rep) {
  CsvWriter csv(path, {"phi_g_deg", "trials", "successes", "success_rate"});
  for (size_t b = 0; b < rep.bin_angles.size(); ++b) {
    csv.write_row({rad2deg(rep.bin_angles[b]), double(rep.trials[b]),
                   double(rep.successes[b]), rep.rate(b)});
  }
}

void write_traversal_csv(const std::string& path, const SweepReport& rep) {
  CsvWriter csv(path, {"phi_g_deg", "trial", "success", "crossed", "dy_m", "dz_m",
                       "dphi_deg", "dtheta_deg"});
  for (const TrialRecord& r : rep.records) {
    csv.write_row({rad2deg(r.phi_g), double(r.trial), double(r.success), double(r.crossed),
                   r.dy, r.dz, rad2deg(r.dphi), rad2deg(r.dtheta)});
  }
}

void write_traversal_stats_csv(const std::string& path, const SweepReport& rep) {
  std::vector<double> dy, dz, dphi, dtheta;
  for (const TrialRecord& r : rep.records) {
    if (!r.crossed) continue;  // no traversal point to measure
    dy.push_back(r.dy);
    dz.push_back(r.dz);
    dphi.push_back(rad2deg(r.dphi));
    dtheta.push_back(rad2deg(r.dtheta));
  }
  CsvWriter csv(path, {"channel", "n", "mean", "std", "q10", "q95", "mean_abs"});
  auto row = [&](const char* name, std::vector<double> v) {
    const ChannelStats st = channel_stats(std::move(v));
    csv.write_raw_row({name, CsvWriter::format_number(st.n), CsvWriter::format_number(st.mean),
                       CsvWriter::format_number(st.stddev), CsvWriter::format_number(st.q10),
                       CsvWriter::format_number(st.q95), CsvWriter::format_number(st.mean_abs)});
  };
  row("dy_m", std::move(dy));
  row("dz_m", std::move(dz));
  row("dphi_deg", std::move(dphi));
  row("dtheta_deg", std::move(dtheta));
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const RunConfig& cfg, const std::vector<std::string>& outputs,
                    const std::vector<std::pair<std::string, double>>& summary) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["domain"] = domain_name(cfg.domain);
  j["seed"] = cfg.seed;
  j["plant"] = {{"mass", cfg.env.nominal_params.mass},
                {"k_thrust", cfg.env.nominal_params.k_thrust},
                {"arm_len", cfg.env.nominal_params.arm_len},
                {"control_hz", cfg.env.control_hz},
                {"kappa", {cfg.env.kappa.x(), cfg.env.kappa.y(), cfg.env.kappa.z()}}};
  j["gap"] = {{"goal_dims", {cfg.env.episode.goal_dims.x(), cfg.env.episode.goal_dims.y()}},
              {"footprint",
               {cfg.env.episode.footprint.length, cfg.env.episode.footprint.width}}};
  j["ablation"] = {{"attitude_reward_off", cfg.attitude_reward_off},
                   {"attitude_augment_off", cfg.attitude_augment_off}};
  j["outputs"] = outputs;
  for (const auto& [k, v] : summary) j["summary"][k] = v;

  std::ofstream out(out_dir + "/manifest.json");
  out << j.dump(2) << "\n";
}

}  // namespace gapflight
