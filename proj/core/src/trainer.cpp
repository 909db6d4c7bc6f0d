#include "gapflight/trainer.hpp"

#include <cstdio>
#include <deque>

#include "gapflight/checkpoint.hpp"
#include "gapflight/csv.hpp"
#include "gapflight/gap_world.hpp"

namespace gapflight {

TrainResult train(TrainEnv& env, SacState& sac, const TrainerConfig& cfg, Rng& rng) {
  TrainResult res;
  ReplayBuffer buffer(sac.hp.buffer_capacity, env.obs_dim(), env.act_dim());

  CsvWriter metrics;
  if (!cfg.metrics_path.empty()) {
    metrics.open(cfg.metrics_path, {"episode", "return", "r_p", "r_a", "r_u", "success", "d_f"});
  }

  std::deque<int> window;
  long window_successes = 0;
  auto rolling = [&]() {
    return window.empty() ? 0.0 : double(window_successes) / double(window.size());
  };

  VecX obs = env.reset();
  double ep_return = 0.0;
  Vec3 ep_components = Vec3::Zero();
  bool curriculum_done = !cfg.curriculum;
  std::uniform_real_distribution<double> uact(-1.0, 1.0);
  double update_debt = 0.0;
  long incidents_at_start = sac.incidents;
  long next_checkpoint = cfg.checkpoint_every;

  while (res.steps < cfg.total_steps) {
    VecX action(env.act_dim());
    if (res.steps < sac.hp.warmup_steps) {
      for (int i = 0; i < action.size(); ++i) action[i] = uact(rng);
    } else {
      action = sample_action(sac.actor, obs, sac.hp, &rng).action;
    }

    const EnvStep st = env.step(action);
    buffer.add(obs, action, st.reward, st.obs, st.done && !st.timeout);
    obs = st.obs;
    ep_return += st.reward;
    ep_components += st.components;
    ++res.steps;

    if (res.steps >= sac.hp.warmup_steps && buffer.size() >= sac.hp.batch) {
      update_debt += cfg.updates_per_step;
      while (update_debt >= 1.0) {
        sac_update(sac, buffer.sample(sac.hp.batch, rng), rng);
        update_debt -= 1.0;
      }
    }

    if (cfg.probe_every > 0 && cfg.probe && res.steps % cfg.probe_every == 0 &&
        cfg.probe(res.steps, sac)) {
      break;
    }

    if (st.done) {
      ++res.episodes;
      window.push_back(st.success ? 1 : 0);
      window_successes += st.success ? 1 : 0;
      if (int(window.size()) > cfg.curriculum_window) {
        window_successes -= window.front();
        window.pop_front();
      }

      if (metrics.is_open()) {
        metrics.write_row({double(res.episodes), ep_return, ep_components[0], ep_components[1],
                           ep_components[2], st.success ? 1.0 : 0.0, env.difficulty()});
      }

      if (cfg.curriculum && int(window.size()) >= cfg.curriculum_window) {
        const double d0 = env.difficulty();
        const double d1 =
            advance_difficulty(d0, rolling(), cfg.curriculum_delta, cfg.curriculum_threshold);
        if (d1 > d0) {
          env.set_difficulty(d1);
          if (cfg.clear_window_on_advance) {
            window.clear();
            window_successes = 0;
          }
          if (d1 >= 1.0 && cfg.aggressive_bias > 0.0) {
            env.set_aggressive_bias(cfg.aggressive_bias);
          }
        }
        curriculum_done = d1 >= 1.0;
      }

      if (cfg.log_every_episodes > 0 && res.episodes % cfg.log_every_episodes == 0) {
        std::printf("episode %ld  steps %ld  d_f %.2f  rolling success %.3f  alpha %.3f\n",
                    res.episodes, res.steps, env.difficulty(), rolling(), sac.alpha());
        std::fflush(stdout);
        if (metrics.is_open()) metrics.flush();
      }

      if (cfg.early_stop_success >= 0.0 && curriculum_done && res.steps >= cfg.min_steps &&
          int(window.size()) >= cfg.curriculum_window && rolling() >= cfg.early_stop_success) {
        break;
      }

      ep_return = 0.0;
      ep_components.setZero();
      obs = env.reset();
    }

    if (sac.incidents - incidents_at_start >= cfg.abort_after_incidents) {
      res.aborted = true;
      break;
    }
    if (cfg.checkpoint_every > 0 && !cfg.checkpoint_path.empty() &&
        res.steps >= next_checkpoint) {
      save_checkpoint(cfg.checkpoint_path, sac);
      next_checkpoint += cfg.checkpoint_every;
    }
  }

  if (!cfg.checkpoint_path.empty() && !res.aborted) {
    save_checkpoint(cfg.checkpoint_path, sac);
  }
  res.final_difficulty = env.difficulty();
  res.rolling_success = rolling();
  return res;
}

}  // namespace gapflight
