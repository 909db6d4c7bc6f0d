#include "gapflight/replay_buffer.hpp"

#include <stdexcept>
#include <unordered_set>

namespace gapflight {

ReplayBuffer::ReplayBuffer(long capacity, int obs_dim, int act_dim)
    : capacity_(capacity),
      obs_(capacity, obs_dim),
      actions_(capacity, act_dim),
      next_obs_(capacity, obs_dim),
      rewards_(capacity),
      done_(capacity) {
  if (capacity <= 0) throw std::invalid_argument("replay capacity must be positive");
}

void ReplayBuffer::add(const VecX& obs, const VecX& action, double reward, const VecX& next_obs,
                       bool done) {
  obs_.row(head_) = obs.transpose();
  actions_.row(head_) = action.transpose();
  next_obs_.row(head_) = next_obs.transpose();
  rewards_[head_] = reward;
  done_[head_] = done ? 1.0 : 0.0;
  head_ = (head_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

ReplayBuffer::Batch ReplayBuffer::sample(int batch_size, Rng& rng) const {
  if (batch_size > size_) throw std::invalid_argument("batch larger than buffer");

  // Floyd's algorithm: batch_size distinct indices in [0, size_).
  std::unordered_set<long> chosen;
  std::vector<long> idx;
  idx.reserve(batch_size);
  for (long j = size_ - batch_size; j < size_; ++j) {
    std::uniform_int_distribution<long> u(0, j);
    long t = u(rng);
    if (chosen.count(t)) t = j;
    chosen.insert(t);
    idx.push_back(t);
  }

  Batch b;
  b.obs.resize(batch_size, obs_.cols());
  b.actions.resize(batch_size, actions_.cols());
  b.next_obs.resize(batch_size, next_obs_.cols());
  b.rewards.resize(batch_size);
  b.done_mask.resize(batch_size);
  for (int i = 0; i < batch_size; ++i) {
    b.obs.row(i) = obs_.row(idx[i]);
    b.actions.row(i) = actions_.row(idx[i]);
    b.next_obs.row(i) = next_obs_.row(idx[i]);
    b.rewards[i] = rewards_[idx[i]];
    b.done_mask[i] = done_[idx[i]];
  }
  return b;
}

}  // namespace gapflight
