#pragma once

#include <vector>

#include "gapflight/common.hpp"

namespace gapflight {

// Dense feed-forward network over Eigen, batch-first (rows = samples).
// Small by design: exactly what the actor/critic updates need, nothing else.
class Mlp {
 public:
  enum class Act { relu, identity, tanh };

  struct Cache {
    std::vector<MatX> pre;   // pre-activation per layer
    std::vector<MatX> post;  // post-activation; post[0] is the input batch
  };

  struct Grads {
    std::vector<MatX> dW;
    std::vector<VecX> db;
    MatX dX;  // gradient w.r.t. the input batch (critic action gradients)
  };

  Mlp() = default;
  // sizes = {in, h1, ..., out}; acts has sizes.size()-1 entries. The last
  // layer's weights and biases are scaled by final_scale after init.
  Mlp(const std::vector<int>& sizes, const std::vector<Act>& acts, Rng& rng,
      double final_scale = 1.0);

  MatX forward(const MatX& x, Cache* cache = nullptr) const;
  VecX forward1(const VecX& x) const;
  Grads backward(const Cache& cache, const MatX& grad_out) const;

  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  size_t n_layers() const { return W_.size(); }
  const std::vector<int>& sizes() const { return sizes_; }
  const std::vector<Act>& activations() const { return acts_; }

  MatX& W(size_t l) { return W_[l]; }
  VecX& b(size_t l) { return b_[l]; }
  const MatX& W(size_t l) const { return W_[l]; }
  const VecX& b(size_t l) const { return b_[l]; }

  long n_params() const;
  // Parameter order: per layer, W row-major then b. Used by the checkpoint
  // format and the finite-difference tests.
  VecX flatten() const;
  void unflatten(const VecX& theta);

  bool finite() const;

 private:
  std::vector<int> sizes_;
  std::vector<Act> acts_;
  std::vector<MatX> W_;  // layer l: (sizes[l+1] x sizes[l])
  std::vector<VecX> b_;
};

// Adam with bias correction, one instance per network.
class Adam {
 public:
  Adam() = default;
  explicit Adam(const Mlp& net, double lr);

  void step(Mlp& net, const Mlp::Grads& g);
  double lr() const { return lr_; }

 private:
  double lr_ = 3e-4, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  long t_ = 0;
  std::vector<MatX> mW_, vW_;
  std::vector<VecX> mb_, vb_;
};

// target <- tau * online + (1 - tau) * target
void polyak_update(Mlp& target, const Mlp& online, double tau);

}  // namespace gapflight
