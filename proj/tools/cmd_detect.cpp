#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "gapflight/synth_cam.hpp"

namespace gapflight {

namespace {

namespace fs = std::filesystem;

std::optional<CameraModel> read_camera_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  std::stringstream ss(line);
  std::vector<double> v;
  std::string cell;
  while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
  if (v.size() != 16) return std::nullopt;
  Mat3 R;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) R(i, j) = v[4 + 3 * i + j];
  return CameraModel::make(v[0], v[1], v[2], v[3], R, Vec3(v[13], v[14], v[15]));
}

std::optional<Vec6> read_truth_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  std::stringstream ss(line);
  Vec6 v;
  std::string cell;
  for (int i = 0; i < 6; ++i) {
    if (!std::getline(ss, cell, ',')) return std::nullopt;
    v[i] = std::stod(cell);
  }
  return v;
}

}  // namespace

int cmd_detect(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  if (cfg.detect_dir.empty()) {
    std::fprintf(stderr, "detect: input file or directory is required (--dir)\n");
    return 1;
  }
  std::filesystem::create_directories(cfg.out_dir);

  // Either a single .pgm frame or a directory of frame_*.pgm.
  std::vector<fs::path> frames;
  fs::path camera_path;
  if (fs::is_directory(cfg.detect_dir)) {
    for (const auto& e : fs::directory_iterator(cfg.detect_dir)) {
      if (e.path().extension() == ".pgm") frames.push_back(e.path());
    }
    std::sort(frames.begin(), frames.end());
    camera_path = fs::path(cfg.detect_dir) / "camera.csv";
  } else {
    frames.push_back(cfg.detect_dir);
    camera_path = fs::path(cfg.detect_dir).parent_path() / "camera.csv";
  }
  if (frames.empty()) {
    std::fprintf(stderr, "detect: no .pgm frames in %s\n", cfg.detect_dir.c_str());
    return 1;
  }

  CameraModel cam = CameraModel::forward_facing(Vec3::Zero());
  if (auto loaded = read_camera_csv(camera_path.string())) {
    cam = *loaded;
  }

  GapDetector det(cfg.detector, cam);
  CsvWriter poses(cfg.out_dir + "/poses.csv",
                  {"frame", "found", "raw_x", "raw_y", "raw_z", "raw_phi", "raw_theta",
                   "raw_psi", "f_x", "f_y", "f_z", "f_phi", "f_theta", "f_psi"});

  std::vector<std::array<double, 6>> errors;  // raw - truth per channel
  int n_found = 0;
  for (size_t i = 0; i < frames.size(); ++i) {
    fs::path depth_path = frames[i];
    depth_path.replace_extension(".depth");
    if (!fs::exists(depth_path)) {
      std::fprintf(stderr, "detect: missing depth file %s\n", depth_path.c_str());
      return 1;
    }
    const BinaryImage img = read_pgm(frames[i].string());
    const DepthImage depth = read_depth(depth_path.string());
    const DetectResult res = det.process(img, depth);

    const Vec6 raw = res.raw.as_vec();
    const Vec6 fil = res.filtered.as_vec();
    std::vector<double> row{double(i), double(res.found)};
    for (int c = 0; c < 6; ++c) row.push_back(raw[c]);
    for (int c = 0; c < 6; ++c) row.push_back(fil[c]);
    poses.write_row(row);

    if (res.found) n_found++;
    fs::path truth_path = frames[i];
    truth_path.replace_extension(".truth.csv");
    if (res.found) {
      if (auto truth = read_truth_csv(truth_path.string())) {
        std::array<double, 6> e;
        for (int c = 0; c < 3; ++c) e[c] = raw[c] - (*truth)[c];
        for (int c = 3; c < 6; ++c) e[c] = wrap_pi(raw[c] - (*truth)[c]);
        errors.push_back(e);
      }
    }
  }

  std::vector<std::string> outputs{"poses.csv", "manifest.json"};
  if (!errors.empty()) {
    static const char* names[6] = {"x_m", "y_m", "z_m", "roll_deg", "pitch_deg", "yaw_deg"};
    CsvWriter stats(cfg.out_dir + "/detect_stats.csv",
                    {"channel", "n", "mean", "std", "q10", "q95", "mean_abs"});
    for (int c = 0; c < 6; ++c) {
      std::vector<double> v;
      for (const auto& e : errors) v.push_back(c < 3 ? e[c] : rad2deg(e[c]));
      const ChannelStats st = channel_stats(std::move(v));
      stats.write_raw_row({names[c], CsvWriter::format_number(st.n),
                           CsvWriter::format_number(st.mean), CsvWriter::format_number(st.stddev),
                           CsvWriter::format_number(st.q10), CsvWriter::format_number(st.q95),
                           CsvWriter::format_number(st.mean_abs)});
    }
    outputs.push_back("detect_stats.csv");
  }

  write_manifest(cfg.out_dir, "detect", cfg, outputs,
                 {{"frames", double(frames.size())},
                  {"found", double(n_found)},
                  {"with_truth", double(errors.size())}});
  return 0;
}

}  // namespace gapflight
