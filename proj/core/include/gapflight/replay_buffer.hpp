#pragma once

#include "gapflight/common.hpp"

namespace gapflight {

// Fixed-capacity FIFO transition store. Batches are drawn uniformly without
// replacement within a batch (Floyd's sampling).
class ReplayBuffer {
 public:
  ReplayBuffer(long capacity, int obs_dim, int act_dim);

  void add(const VecX& obs, const VecX& action, double reward, const VecX& next_obs, bool done);

  struct Batch {
    MatX obs, actions, next_obs;  // rows = samples
    VecX rewards, done_mask;      // done_mask: 1.0 where episode ended
  };
  Batch sample(int batch_size, Rng& rng) const;

  long size() const { return size_; }
  long capacity() const { return capacity_; }

 private:
  long capacity_, size_ = 0, head_ = 0;
  MatX obs_, actions_, next_obs_;
  VecX rewards_, done_;
};

}  // namespace gapflight
