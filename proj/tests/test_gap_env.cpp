#include <cstdio>
#include <stdexcept>

#include "doctest.h"
#include "gapflight/gap_env.hpp"

using namespace gapflight;

namespace {

// Deterministic single-trajectory setup: fixed start, fixed gap, no noise.
GapEnvConfig pinned_config() {
  GapEnvConfig cfg;
  cfg.training_mode = false;
  cfg.episode.start_pos_mean = Vec3(-0.5, 0.0, 1.5);
  cfg.episode.pos_std = 0.0;
  cfg.episode.vel_std = 0.0;
  cfg.episode.att_std = 0.0;
  cfg.episode.param_rel_std = 0.0;
  cfg.episode.roll_min = 0.0;
  cfg.episode.roll_max = 0.0;
  return cfg;
}

// Pitch pulse: lean forward for a few periods, lean back as long, then coast.
VecX pulse_action(int i, int up, int down) {
  VecX a = VecX::Zero(3);
  if (i < up) a[1] = 1.0;
  else if (i < up + down) a[1] = -1.0;
  return a;
}

}  // namespace

TEST_CASE("environment advertises the observation and action layout") {
  GapEnv env(GapEnvConfig{}, 3);
  CHECK(env.obs_dim() == 19);
  CHECK(env.act_dim() == 3);
  const VecX obs = env.reset();
  REQUIRE(obs.size() == 19);
  CHECK(obs.allFinite());
  CHECK_THROWS_AS(env.step(VecX::Zero(2)), std::invalid_argument);
}

TEST_CASE("same seed and actions replay the same episode exactly") {
  GapEnvConfig cfg;  // defaults: noise and augmentation on
  GapEnv a(cfg, 17), b(cfg, 17), c(cfg, 18);
  const VecX oa = a.reset(), ob = b.reset(), oc = c.reset();
  CHECK((oa - ob).cwiseAbs().maxCoeff() == 0.0);
  CHECK((oa - oc).cwiseAbs().maxCoeff() > 0.0);
  for (int i = 0; i < 40; ++i) {
    VecX act(3);
    act << 0.1, 0.2 - 0.01 * i, -0.05;
    const EnvStep sa = a.step(act);
    const EnvStep sb = b.step(act);
    CHECK(sa.reward == sb.reward);
    CHECK((sa.obs - sb.obs).cwiseAbs().maxCoeff() == 0.0);
    CHECK(sa.done == sb.done);
    if (sa.done) break;
  }
}

TEST_CASE("idle policy hovers until the clock runs out") {
  GapEnv env(pinned_config(), 1);
  env.reset();
  EnvStep st;
  int steps = 0;
  for (int i = 0; i < 200; ++i) {
    st = env.step(VecX::Zero(3));
    ++steps;
    if (st.done) break;
    CHECK(std::abs(env.state().p.z() - 1.5) < 0.2);
  }
  CHECK(steps == 160);  // 8 s at 20 Hz
  CHECK(env.verdict() == Verdict::timeout);
  CHECK(st.done);
  CHECK(st.timeout);
  CHECK_FALSE(st.success);
  CHECK_FALSE(env.crossed());
  CHECK_THROWS_AS(env.step(VecX::Zero(3)), std::logic_error);
}

TEST_CASE("a clean traversal scores the terminal bonus") {
  GapEnv env(pinned_config(), 1);
  env.reset();
  EnvStep st;
  for (int i = 0; i < 160; ++i) {
    st = env.step(pulse_action(i, 2, 2));
    if (st.done) break;
  }
  CHECK(env.verdict() == Verdict::success);
  CHECK(st.success);
  CHECK_FALSE(st.timeout);
  CHECK(st.reward > 400.0);  // 500 minus shaping
  CHECK(env.crossed());
  // crossing state is interpolated onto the gap plane
  CHECK(std::abs(env.crossing_state().p.x()) < 1e-9);
  CHECK(env.crossing_state().v.x() > 0.5);
}

TEST_CASE("leaving the arena ends the episode without success") {
  GapEnv env(pinned_config(), 1);
  env.reset();
  EnvStep st;
  for (int i = 0; i < 200; ++i) {
    st = env.step(pulse_action(i, 3, 0));
    if (st.done) break;
  }
  CHECK(env.verdict() == Verdict::out_of_bounds);
  CHECK(st.done);
  CHECK_FALSE(st.success);
  CHECK(env.state().p.x() > 1.5 - 1e-9);
}

TEST_CASE("clipping the frame registers as a collision") {
  GapEnv env(pinned_config(), 1);
  env.reset();
  EnvStep st;
  for (int i = 0; i < 200; ++i) {
    st = env.step(pulse_action(i, 2, 4));
    if (st.done) break;
  }
  CHECK(env.verdict() == Verdict::collision);
  CHECK(st.done);
  CHECK_FALSE(st.success);
}

TEST_CASE("difficulty shrinks the gap and the roll override pins the angle") {
  GapEnvConfig cfg;
  GapEnv env(cfg, 9);
  env.set_difficulty(0.0);
  env.reset();
  CHECK(env.gap().width == doctest::Approx(1.4));
  CHECK(env.gap().height == doctest::Approx(1.0));
  env.set_difficulty(1.0);
  env.reset();
  CHECK(env.gap().width == doctest::Approx(0.70));
  CHECK(env.gap().height == doctest::Approx(0.30));
  CHECK(env.difficulty() == doctest::Approx(1.0));

  env.override_roll(deg2rad(37.0));
  for (int i = 0; i < 3; ++i) {
    env.reset();
    CHECK(env.gap().roll() == doctest::Approx(deg2rad(37.0)).epsilon(1e-12));
  }
}

TEST_CASE("trajectory log captures every step with the verdict") {
  const std::string path = "/tmp/gapflight_test_traj.csv";
  {
    CsvWriter log(path, GapEnv::trajectory_columns());
    GapEnv env(pinned_config(), 1);
    env.set_trajectory_log(&log);
    env.reset();
    for (int i = 0; i < 160; ++i) {
      if (env.step(pulse_action(i, 2, 2)).done) break;
    }
    log.flush();
  }
  std::FILE* f = std::fopen(path.c_str(), "r");
  REQUIRE(f != nullptr);
  char line[512];
  int rows = 0;
  std::string last;
  while (std::fgets(line, sizeof line, f)) {
    last = line;
    ++rows;
  }
  std::fclose(f);
  std::remove(path.c_str());
  CHECK(rows >= 10);
  CHECK(last.find("success") != std::string::npos);
}
