#include <cstdio>
#include <filesystem>
#include <fstream>

#include "commands.hpp"
#include "gapflight/synth_cam.hpp"
#include "json.hpp"

namespace gapflight {

namespace {

std::string frame_stem(int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%04d", i);
  return buf;
}

bool outer_frame_visible(const GapSpec& gap, const CameraModel& cam, int w, int h,
                         double border) {
  const double hw = 0.5 * gap.width + gap.frame_margin;
  const double hh = 0.5 * gap.height + gap.frame_margin;
  for (int sy : {-1, 1}) {
    for (int sz : {-1, 1}) {
      const Vec3 corner = gap.center + gap.rot * Vec3(0.0, sy * hw, sz * hh);
      const PixelDepth pd = project_point(corner, cam);
      if (!pd.in_front) return false;
      if (pd.pix.x() < border || pd.pix.x() > w - 1 - border) return false;
      if (pd.pix.y() < border || pd.pix.y() > h - 1 - border) return false;
    }
  }
  return true;
}

}  // namespace

int cmd_render(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  const RenderSpec& r = cfg.render;
  std::filesystem::create_directories(cfg.out_dir);

  const CameraModel cam = CameraModel::forward_facing(Vec3::Zero(), r.fx, r.fy,
                                                      r.width * 0.5, r.height * 0.5);
  {
    CsvWriter ccsv(cfg.out_dir + "/camera.csv",
                   {"fx", "fy", "cx", "cy", "r00", "r01", "r02", "r10", "r11", "r12", "r20",
                    "r21", "r22", "t0", "t1", "t2"});
    std::vector<double> row{cam.K(0, 0), cam.K(1, 1), cam.K(0, 2), cam.K(1, 2)};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) row.push_back(cam.R_wc(i, j));
    for (int i = 0; i < 3; ++i) row.push_back(cam.t_wc[i]);
    ccsv.write_row(row);
  }

  std::vector<std::string> files{"camera.csv"};
  for (int i = 0; i < r.count; ++i) {
    Rng rng(mix_seed(cfg.seed, std::uint64_t(i)));
    std::uniform_real_distribution<double> uroll(r.roll_min, r.roll_max);
    std::uniform_real_distribution<double> urange(r.range_min, r.range_max);
    std::normal_distribution<double> gauss(0.0, 1.0);

    SceneSpec scene;
    scene.cam = cam;
    scene.width = r.width;
    scene.height = r.height;
    scene.depth_noise_rel = r.depth_noise_rel;

    // The detector needs the whole outer frame in view, so resample poses
    // that would clip it (close range plus large roll).
    bool placed = false;
    for (int tries = 0; tries < 1000 && !placed; ++tries) {
      const double roll = uroll(rng);
      const double range = urange(rng);
      const Vec3 center(range, gauss(rng) * r.lateral_std, gauss(rng) * r.height_std);
      scene.gap = GapSpec::with_roll(roll, center, r.gap_dims.x(), r.gap_dims.y());
      scene.gap.frame_margin = r.frame_margin;
      placed = outer_frame_visible(scene.gap, cam, r.width, r.height, r.frustum_border_px);
    }
    if (!placed) {
      std::fprintf(stderr, "render: no in-frustum pose found for frame %d; "
                           "check ranges in [render]\n", i);
      return 1;
    }

    const RenderOut out = render_gap_scene(scene, r.depth_noise_rel > 0.0 ? &rng : nullptr);
    const std::string stem = frame_stem(i);
    write_pgm(cfg.out_dir + "/" + stem + ".pgm", out.binary);
    write_depth(cfg.out_dir + "/" + stem + ".depth", out.depth);
    CsvWriter truth(cfg.out_dir + "/" + stem + ".truth.csv",
                    {"x", "y", "z", "phi", "theta", "psi"});
    truth.write_row({out.truth.p.x(), out.truth.p.y(), out.truth.p.z(), out.truth.phi,
                     out.truth.theta, out.truth.psi});
    files.push_back(stem + ".pgm");
    files.push_back(stem + ".depth");
    files.push_back(stem + ".truth.csv");
  }

  nlohmann::ordered_json j;
  j["command"] = "render";
  j["seed"] = cfg.seed;
  j["count"] = r.count;
  j["roll_range_deg"] = {rad2deg(r.roll_min), rad2deg(r.roll_max)};
  j["range_m"] = {r.range_min, r.range_max};
  j["depth_noise_rel"] = r.depth_noise_rel;
  j["gap_dims"] = {r.gap_dims.x(), r.gap_dims.y()};
  j["files"] = files;
  std::ofstream(cfg.out_dir + "/manifest.json") << j.dump(2) << "\n";
  return 0;
}

}  // namespace gapflight
