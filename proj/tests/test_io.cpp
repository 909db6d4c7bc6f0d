#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "gapflight/checkpoint.hpp"
#include "gapflight/csv.hpp"
#include "gapflight/image.hpp"
#include "gapflight/toml_lite.hpp"

using namespace gapflight;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempPath {
  std::string path;
  explicit TempPath(const std::string& name) : path("/tmp/gapflight_test_" + name) {}
  ~TempPath() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("config parser handles sections, types, comments, and arrays") {
  const char* text = R"(
# top comment
title = "desk run"
[sac]
lr = 3e-4            # trailing comment
batch = 512
resume = false
hidden = [128, 128]
[env.gap]
roll_max = 30.0
names = ["a", "b"]
)";
  const TomlLite t = TomlLite::parse_string(text);
  CHECK(t.get_string("title", "") == "desk run");
  CHECK(t.get_double("sac.lr", 0.0) == doctest::Approx(3e-4));
  CHECK(t.get_int("sac.batch", 0) == 512);
  CHECK(t.get_bool("sac.resume", true) == false);
  const std::vector<double> hidden = t.get_array("sac.hidden", {});
  REQUIRE(hidden.size() == 2);
  CHECK(hidden[0] == doctest::Approx(128.0));
  CHECK(t.get_double("env.gap.roll_max", 0.0) == doctest::Approx(30.0));
  const std::vector<std::string> names = t.get_string_array("env.gap.names", {});
  REQUIRE(names.size() == 2);
  CHECK(names[1] == "b");
  // fallbacks for absent keys, presence checks for real ones
  CHECK(t.get_double("sac.gamma", 0.95) == doctest::Approx(0.95));
  CHECK(t.has("sac.lr"));
  CHECK_FALSE(t.has("sac.gamma"));
}

TEST_CASE("config parser rejects malformed input") {
  CHECK_THROWS_AS(TomlLite::parse_string("key with space = 1"), std::runtime_error);
  CHECK_THROWS_AS(TomlLite::parse_string("= 3"), std::runtime_error);
  CHECK_THROWS_AS(TomlLite::parse_string("[unclosed\nx = 1"), std::runtime_error);
  CHECK_THROWS_AS(TomlLite::parse_string("x = \"no closing quote"), std::runtime_error);
  CHECK_THROWS_AS(TomlLite::parse_file("/nonexistent/path.toml"), std::runtime_error);
}

TEST_CASE("type mismatches surface instead of silently coercing") {
  const TomlLite t = TomlLite::parse_string("x = \"text\"\nn = 2.5\n");
  CHECK_THROWS_AS(t.get_double("x", 0.0), std::runtime_error);
  CHECK_THROWS_AS(t.get_int("n", 0), std::runtime_error);  // 2.5 is not integral
}

TEST_CASE("csv writer produces stable byte-identical output") {
  TempPath a("a.csv"), b("b.csv");
  for (const auto* p : {&a, &b}) {
    CsvWriter w(p->path, {"step", "reward", "note"});
    w.write_row({1.0, -0.5, 3.0});
    w.write_row({2.0, 1.0 / 3.0, 4.0});
    w.write_raw_row({"3", "0.25", "tagged"});
    w.flush();
  }
  const std::string sa = slurp(a.path);
  CHECK(sa == slurp(b.path));
  CHECK(sa.find("step,reward,note\n") == 0);
  CHECK(sa.find("tagged") != std::string::npos);
  // %.10g keeps full precision short numbers without float noise
  CHECK(sa.find("0.3333333333") != std::string::npos);
  CHECK(sa.find("-0.5") != std::string::npos);
}

TEST_CASE("csv writer rejects rows of the wrong width") {
  TempPath p("w.csv");
  CsvWriter w(p.path, {"a", "b"});
  CHECK_THROWS_AS(w.write_row({1.0}), std::runtime_error);
}

TEST_CASE("binary image survives the pgm round-trip") {
  BinaryImage img(31, 17);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) img.at(x, y) = ((x * 7 + y * 3) % 5 == 0) ? 1 : 0;
  TempPath p("img.pgm");
  write_pgm(p.path, img);
  const BinaryImage back = read_pgm(p.path);
  REQUIRE(back.width == img.width);
  REQUIRE(back.height == img.height);
  CHECK(back.px == img.px);
  const std::string raw = slurp(p.path);
  CHECK(raw.rfind("P5", 0) == 0);
}

TEST_CASE("depth raster round-trips floats and applies the scale") {
  DepthImage d(9, 5);
  for (int y = 0; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x) d.at(x, y) = 0.5f + 0.25f * float(x) + 0.125f * float(y);
  d.at(3, 2) = 0.0f;  // invalid pixel stays invalid
  TempPath p("d.f32");
  write_depth(p.path, d, 2.0);
  const DepthImage back = read_depth(p.path);
  REQUIRE(back.width == d.width);
  REQUIRE(back.height == d.height);
  for (size_t i = 0; i < d.m.size(); ++i) CHECK(back.m[i] == doctest::Approx(d.m[i]).epsilon(1e-7));
}

TEST_CASE("checkpoint restores networks and scalars exactly") {
  SacHyper hp;
  hp.hidden = {24, 24};
  SacState s = SacState::make(7, 3, hp, 77);
  s.log_alpha = -1.25;
  s.update_count = 4242;
  // make the nets distinguishable from a fresh init
  s.actor.W(0).array() += 0.125;
  s.target2.b(1).array() -= 0.5;

  TempPath p("ckpt.bin");
  save_checkpoint(p.path, s);
  const SacState back = load_checkpoint(p.path);
  CHECK(back.obs_dim == 7);
  CHECK(back.act_dim == 3);
  CHECK(back.hp.hidden == hp.hidden);
  CHECK(back.log_alpha == doctest::Approx(-1.25).epsilon(0.0));
  CHECK(back.update_count == 4242);
  CHECK((back.actor.flatten() - s.actor.flatten()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.critic1.flatten() - s.critic1.flatten()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.critic2.flatten() - s.critic2.flatten()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.target1.flatten() - s.target1.flatten()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.target2.flatten() - s.target2.flatten()).cwiseAbs().maxCoeff() == 0.0);

  // restored policy behaves identically
  const VecX obs = VecX::Constant(7, 0.3);
  const ActionSample a0 = sample_action(s.actor, obs, s.hp, nullptr);
  const ActionSample a1 = sample_action(back.actor, obs, back.hp, nullptr);
  CHECK((a0.action - a1.action).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("checkpoint loader rejects truncated and foreign files") {
  TempPath p("bad.bin");
  {
    std::ofstream out(p.path, std::ios::binary);
    out << "not a checkpoint at all";
  }
  CHECK_THROWS_AS(load_checkpoint(p.path), std::runtime_error);

  SacHyper hp;
  hp.hidden = {8};
  SacState s = SacState::make(2, 1, hp, 1);
  TempPath q("trunc.bin");
  save_checkpoint(q.path, s);
  const std::string whole = slurp(q.path);
  {
    std::ofstream out(q.path, std::ios::binary);
    out.write(whole.data(), long(whole.size()) / 2);
  }
  CHECK_THROWS_AS(load_checkpoint(q.path), std::runtime_error);
  CHECK_THROWS_AS(load_checkpoint("/nonexistent/ckpt.bin"), std::runtime_error);
}
