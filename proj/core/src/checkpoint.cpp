#include "gapflight/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace gapflight {
namespace {

constexpr char kMagic[8] = {'G', 'A', 'P', 'S', 'A', 'C', '0', '1'};
constexpr std::uint32_t kVersion = 1;

// Serialization assumes a little-endian host, which covers every target this
// project builds on; a big-endian port would need byte swaps here.
static_assert(std::endian::native == std::endian::little, "little-endian host required");

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("truncated checkpoint");
  return v;
}

void put_net(std::ofstream& out, const Mlp& net) {
  const VecX theta = net.flatten();
  out.write(reinterpret_cast<const char*>(theta.data()), theta.size() * sizeof(double));
}

void get_net(std::ifstream& in, Mlp& net) {
  VecX theta(net.n_params());
  in.read(reinterpret_cast<char*>(theta.data()), theta.size() * sizeof(double));
  if (!in) throw std::runtime_error("truncated checkpoint parameters");
  net.unflatten(theta);
}

}  // namespace

void save_checkpoint(const std::string& path, const SacState& s) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + tmp);
    out.write(kMagic, sizeof(kMagic));
    put(out, kVersion);
    put(out, std::uint32_t(s.obs_dim));
    put(out, std::uint32_t(s.act_dim));
    put(out, std::uint32_t(s.hp.hidden.size()));
    for (int h : s.hp.hidden) put(out, std::uint32_t(h));
    put(out, s.hp.lr);
    put(out, s.hp.gamma);
    put(out, s.hp.tau);
    put(out, std::uint32_t(s.hp.batch));
    put(out, std::uint32_t(s.hp.target_interval));
    put(out, s.hp.target_entropy);
    put(out, s.hp.logstd_min);
    put(out, s.hp.logstd_max);
    put(out, s.log_alpha);
    put(out, std::uint64_t(s.update_count));
    put_net(out, s.actor);
    put_net(out, s.critic1);
    put_net(out, s.critic2);
    put_net(out, s.target1);
    put_net(out, s.target2);
    if (!out) throw std::runtime_error("checkpoint write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("cannot move checkpoint into place: " + path);
  }
}

SacState load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not a checkpoint file: " + path);
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) {
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  }

  SacHyper hp;
  const int obs_dim = int(get<std::uint32_t>(in));
  const int act_dim = int(get<std::uint32_t>(in));
  const auto n_hidden = get<std::uint32_t>(in);
  hp.hidden.clear();
  for (std::uint32_t i = 0; i < n_hidden; ++i) hp.hidden.push_back(int(get<std::uint32_t>(in)));
  hp.lr = get<double>(in);
  hp.gamma = get<double>(in);
  hp.tau = get<double>(in);
  hp.batch = int(get<std::uint32_t>(in));
  hp.target_interval = int(get<std::uint32_t>(in));
  hp.target_entropy = get<double>(in);
  hp.logstd_min = get<double>(in);
  hp.logstd_max = get<double>(in);
  const double log_alpha = get<double>(in);
  const auto update_count = get<std::uint64_t>(in);

  SacState s = SacState::make(obs_dim, act_dim, hp, 0);
  s.log_alpha = log_alpha;
  s.update_count = long(update_count);
  get_net(in, s.actor);
  get_net(in, s.critic1);
  get_net(in, s.critic2);
  get_net(in, s.target1);
  get_net(in, s.target2);
  return s;
}

}  // namespace gapflight
