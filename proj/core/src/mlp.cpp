#include "gapflight/mlp.hpp"

#include <stdexcept>

namespace gapflight {

Mlp::Mlp(const std::vector<int>& sizes, const std::vector<Act>& acts, Rng& rng,
         double final_scale)
    : sizes_(sizes), acts_(acts) {
  if (sizes.size() < 2 || acts.size() != sizes.size() - 1) {
    throw std::invalid_argument("inconsistent mlp shape");
  }
  for (size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int n_in = sizes[l], n_out = sizes[l + 1];
    const double bound = 1.0 / std::sqrt(double(n_in));
    std::uniform_real_distribution<double> u(-bound, bound);
    MatX w(n_out, n_in);
    VecX b(n_out);
    for (int i = 0; i < n_out; ++i) {
      for (int j = 0; j < n_in; ++j) w(i, j) = u(rng);
      b[i] = u(rng);
    }
    if (l + 2 == sizes.size()) {
      w *= final_scale;
      b *= final_scale;
    }
    W_.push_back(std::move(w));
    b_.push_back(std::move(b));
  }
}

namespace {

void apply_act(Mlp::Act act, MatX& z) {
  switch (act) {
    case Mlp::Act::relu:
      z = z.cwiseMax(0.0);
      break;
    case Mlp::Act::tanh:
      z = z.array().tanh().matrix();
      break;
    case Mlp::Act::identity:
      break;
  }
}

}  // namespace

MatX Mlp::forward(const MatX& x, Cache* cache) const {
  if (x.cols() != sizes_.front()) throw std::invalid_argument("mlp input width mismatch");
  if (cache) {
    cache->pre.clear();
    cache->post.clear();
    cache->post.push_back(x);
  }
  MatX a = x;
  for (size_t l = 0; l < W_.size(); ++l) {
    MatX z = a * W_[l].transpose();
    z.rowwise() += b_[l].transpose();
    if (cache) cache->pre.push_back(z);
    apply_act(acts_[l], z);
    if (cache) cache->post.push_back(z);
    a = std::move(z);
  }
  return a;
}

VecX Mlp::forward1(const VecX& x) const {
  return forward(x.transpose()).row(0).transpose();
}

Mlp::Grads Mlp::backward(const Cache& cache, const MatX& grad_out) const {
  if (cache.pre.size() != W_.size()) throw std::invalid_argument("stale mlp cache");
  Grads g;
  g.dW.resize(W_.size());
  g.db.resize(W_.size());

  MatX da = grad_out;
  for (size_t li = W_.size(); li-- > 0;) {
    MatX dz;
    switch (acts_[li]) {
      case Act::relu:
        dz = da.cwiseProduct((cache.pre[li].array() > 0.0).cast<double>().matrix());
        break;
      case Act::tanh:
        dz = da.cwiseProduct((1.0 - cache.post[li + 1].array().square()).matrix());
        break;
      case Act::identity:
        dz = da;
        break;
    }
    g.dW[li] = dz.transpose() * cache.post[li];
    g.db[li] = dz.colwise().sum().transpose();
    da = dz * W_[li];
  }
  g.dX = std::move(da);
  return g;
}

long Mlp::n_params() const {
  long n = 0;
  for (size_t l = 0; l < W_.size(); ++l) n += W_[l].size() + b_[l].size();
  return n;
}

VecX Mlp::flatten() const {
  VecX theta(n_params());
  long k = 0;
  for (size_t l = 0; l < W_.size(); ++l) {
    for (int i = 0; i < W_[l].rows(); ++i)
      for (int j = 0; j < W_[l].cols(); ++j) theta[k++] = W_[l](i, j);
    for (int i = 0; i < b_[l].size(); ++i) theta[k++] = b_[l][i];
  }
  return theta;
}

void Mlp::unflatten(const VecX& theta) {
  if (theta.size() != n_params()) throw std::invalid_argument("parameter vector size mismatch");
  long k = 0;
  for (size_t l = 0; l < W_.size(); ++l) {
    for (int i = 0; i < W_[l].rows(); ++i)
      for (int j = 0; j < W_[l].cols(); ++j) W_[l](i, j) = theta[k++];
    for (int i = 0; i < b_[l].size(); ++i) b_[l][i] = theta[k++];
  }
}

bool Mlp::finite() const {
  for (size_t l = 0; l < W_.size(); ++l) {
    if (!W_[l].allFinite() || !b_[l].allFinite()) return false;
  }
  return true;
}

Adam::Adam(const Mlp& net, double lr) : lr_(lr) {
  for (size_t l = 0; l < net.n_layers(); ++l) {
    mW_.push_back(MatX::Zero(net.W(l).rows(), net.W(l).cols()));
    vW_.push_back(MatX::Zero(net.W(l).rows(), net.W(l).cols()));
    mb_.push_back(VecX::Zero(net.b(l).size()));
    vb_.push_back(VecX::Zero(net.b(l).size()));
  }
}

void Adam::step(Mlp& net, const Mlp::Grads& g) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, double(t_));
  const double c2 = 1.0 - std::pow(beta2_, double(t_));
  const double alpha = lr_ * std::sqrt(c2) / c1;
  for (size_t l = 0; l < net.n_layers(); ++l) {
    mW_[l] = beta1_ * mW_[l] + (1.0 - beta1_) * g.dW[l];
    vW_[l] = beta2_ * vW_[l] + (1.0 - beta2_) * g.dW[l].cwiseProduct(g.dW[l]);
    net.W(l).array() -= alpha * mW_[l].array() / (vW_[l].array().sqrt() + eps_);
    mb_[l] = beta1_ * mb_[l] + (1.0 - beta1_) * g.db[l];
    vb_[l] = beta2_ * vb_[l] + (1.0 - beta2_) * g.db[l].cwiseProduct(g.db[l]);
    net.b(l).array() -= alpha * mb_[l].array() / (vb_[l].array().sqrt() + eps_);
  }
}

void polyak_update(Mlp& target, const Mlp& online, double tau) {
  for (size_t l = 0; l < target.n_layers(); ++l) {
    target.W(l) = tau * online.W(l) + (1.0 - tau) * target.W(l);
    target.b(l) = tau * online.b(l) + (1.0 - tau) * target.b(l);
  }
}

}  // namespace gapflight
