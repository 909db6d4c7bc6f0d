#include "gapflight/sac.hpp"

namespace gapflight {

namespace {

constexpr double kLogSqrt2Pi = 0.9189385332046727;  // log(sqrt(2*pi))

double softplus(double x) { return x > 20.0 ? x : std::log1p(std::exp(x)); }

// log(1 - tanh(u)^2) without catastrophic cancellation for large |u|.
double log_one_minus_tanh_sq(double u) {
  return 2.0 * (std::log(2.0) - u - softplus(-2.0 * u));
}

struct PolicyHead {
  MatX mu, logstd, std_dev, eps, u, a;  // all batch x act_dim
  MatX clamped;                         // 1.0 where logstd hit a bound
  VecX logp;                            // per-sample log-density
};

// Split the actor output into the squashed-Gaussian head. eps_rng == nullptr
// gives the deterministic policy (eps = 0).
PolicyHead make_head(const MatX& actor_out, const SacHyper& hp, Rng* eps_rng) {
  const int B = int(actor_out.rows());
  const int A = int(actor_out.cols()) / 2;
  PolicyHead h;
  h.mu = actor_out.leftCols(A);
  h.logstd.resize(B, A);
  h.clamped.resize(B, A);
  for (int i = 0; i < B; ++i) {
    for (int j = 0; j < A; ++j) {
      const double raw = actor_out(i, A + j);
      const bool low = raw < hp.logstd_min, high = raw > hp.logstd_max;
      h.logstd(i, j) = low ? hp.logstd_min : (high ? hp.logstd_max : raw);
      h.clamped(i, j) = (low || high) ? 1.0 : 0.0;
    }
  }
  h.std_dev = h.logstd.array().exp().matrix();
  h.eps = MatX::Zero(B, A);
  if (eps_rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < B; ++i)
      for (int j = 0; j < A; ++j) h.eps(i, j) = n(*eps_rng);
  }
  h.u = h.mu + h.std_dev.cwiseProduct(h.eps);
  h.a = h.u.array().tanh().matrix();

  h.logp = VecX::Zero(B);
  for (int i = 0; i < B; ++i) {
    double lp = 0.0;
    for (int j = 0; j < A; ++j) {
      lp += -0.5 * h.eps(i, j) * h.eps(i, j) - h.logstd(i, j) - kLogSqrt2Pi -
            log_one_minus_tanh_sq(h.u(i, j));
    }
    h.logp[i] = lp;
  }
  return h;
}

MatX cat_cols(const MatX& a, const MatX& b) {
  MatX out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

}  // namespace

SacState SacState::make(int obs_dim, int act_dim, SacHyper hp, std::uint64_t seed) {
  if (std::isnan(hp.target_entropy)) hp.target_entropy = -double(act_dim);
  SacState s;
  s.hp = hp;
  s.obs_dim = obs_dim;
  s.act_dim = act_dim;
  s.log_alpha = hp.init_log_alpha;

  Rng rng(seed);
  std::vector<int> actor_sizes{obs_dim};
  std::vector<int> critic_sizes{obs_dim + act_dim};
  std::vector<Mlp::Act> acts;
  for (int hsz : hp.hidden) {
    actor_sizes.push_back(hsz);
    critic_sizes.push_back(hsz);
    acts.push_back(Mlp::Act::relu);
  }
  actor_sizes.push_back(2 * act_dim);
  critic_sizes.push_back(1);
  acts.push_back(Mlp::Act::identity);

  s.actor = Mlp(actor_sizes, acts, rng, hp.actor_final_scale);
  s.critic1 = Mlp(critic_sizes, acts, rng);
  s.critic2 = Mlp(critic_sizes, acts, rng);
  s.target1 = s.critic1;
  s.target2 = s.critic2;
  s.opt_actor = Adam(s.actor, hp.lr);
  s.opt_c1 = Adam(s.critic1, hp.lr);
  s.opt_c2 = Adam(s.critic2, hp.lr);
  return s;
}

ActionSample sample_action(const Mlp& actor, const VecX& obs, const SacHyper& hp, Rng* rng) {
  const MatX out = actor.forward(obs.transpose());
  const PolicyHead h = make_head(out, hp, rng);
  ActionSample res;
  res.action = h.a.row(0).transpose();
  res.log_prob = h.logp[0];
  return res;
}

SacLosses sac_update(SacState& s, const ReplayBuffer::Batch& batch, Rng& rng) {
  SacLosses L;
  const int B = int(batch.obs.rows());
  const double inv_b = 1.0 / double(B);
  const double alpha = s.alpha();
  L.alpha = alpha;

  // --- Critic targets from fresh next actions under the current policy.
  const MatX next_out = s.actor.forward(batch.next_obs);
  const PolicyHead next_h = make_head(next_out, s.hp, &rng);
  const MatX xq_next = cat_cols(batch.next_obs, next_h.a);
  const VecX q1n = s.target1.forward(xq_next).col(0);
  const VecX q2n = s.target2.forward(xq_next).col(0);
  VecX y(B);
  for (int i = 0; i < B; ++i) {
    const double qmin = std::min(q1n[i], q2n[i]);
    y[i] = batch.rewards[i] +
           s.hp.gamma * (1.0 - batch.done_mask[i]) * (qmin - alpha * next_h.logp[i]);
  }

  // --- Critic regression.
  const MatX xq = cat_cols(batch.obs, batch.actions);
  Mlp::Cache c1_cache, c2_cache;
  const VecX q1 = s.critic1.forward(xq, &c1_cache).col(0);
  const VecX q2 = s.critic2.forward(xq, &c2_cache).col(0);
  const VecX e1 = q1 - y, e2 = q2 - y;
  L.critic1 = e1.squaredNorm() * inv_b;
  L.critic2 = e2.squaredNorm() * inv_b;

  const Mlp::Grads g1 = s.critic1.backward(c1_cache, 2.0 * inv_b * e1);
  const Mlp::Grads g2 = s.critic2.backward(c2_cache, 2.0 * inv_b * e2);

  // --- Actor: ascend min-Q(s, a_pi) - alpha * log pi.
  Mlp::Cache actor_cache;
  const MatX actor_out = s.actor.forward(batch.obs, &actor_cache);
  const PolicyHead h = make_head(actor_out, s.hp, &rng);
  const int A = s.act_dim;

  const MatX xq_pi = cat_cols(batch.obs, h.a);
  Mlp::Cache cq1_cache, cq2_cache;
  const VecX q1pi = s.critic1.forward(xq_pi, &cq1_cache).col(0);
  const VecX q2pi = s.critic2.forward(xq_pi, &cq2_cache).col(0);

  double actor_loss = 0.0;
  VecX sel1 = VecX::Zero(B), sel2 = VecX::Zero(B);
  for (int i = 0; i < B; ++i) {
    const double qmin = std::min(q1pi[i], q2pi[i]);
    actor_loss += alpha * h.logp[i] - qmin;
    (q1pi[i] <= q2pi[i] ? sel1[i] : sel2[i]) = 1.0;
  }
  L.actor = actor_loss * inv_b;
  L.entropy = -h.logp.mean();

  // dQmin/da via the critics' input gradients; each sample routed to its
  // selected critic. The parameter gradients of these passes are discarded.
  const Mlp::Grads gq1 = s.critic1.backward(cq1_cache, inv_b * sel1);
  const Mlp::Grads gq2 = s.critic2.backward(cq2_cache, inv_b * sel2);
  const MatX dq_da = gq1.dX.rightCols(A) + gq2.dX.rightCols(A);

  // d actor_loss / d(mu, logstd), holding the noise eps fixed:
  //   d logp / d mu      = 2 tanh(u)
  //   d logp / d logstd  = -1 + 2 tanh(u) * std * eps
  //   d a    / d mu      = 1 - a^2
  //   d a    / d logstd  = (1 - a^2) * std * eps
  MatX d_out(B, 2 * A);
  for (int i = 0; i < B; ++i) {
    for (int j = 0; j < A; ++j) {
      const double th = std::tanh(h.u(i, j));
      const double one_m_a2 = 1.0 - h.a(i, j) * h.a(i, j);
      const double se = h.std_dev(i, j) * h.eps(i, j);
      const double d_mu = inv_b * alpha * 2.0 * th - dq_da(i, j) * one_m_a2;
      double d_ls = inv_b * alpha * (-1.0 + 2.0 * th * se) - dq_da(i, j) * one_m_a2 * se;
      if (h.clamped(i, j) > 0.0) d_ls = 0.0;
      d_out(i, j) = d_mu;
      d_out(i, A + j) = d_ls;
    }
  }
  const Mlp::Grads ga = s.actor.backward(actor_cache, d_out);

  // --- Temperature: drive entropy toward the target.
  const double alpha_grad = -(h.logp.array() + s.hp.target_entropy).mean();
  L.alpha_loss = -s.log_alpha * (h.logp.array() + s.hp.target_entropy).mean();

  const bool finite = std::isfinite(L.critic1) && std::isfinite(L.critic2) &&
                      std::isfinite(L.actor) && std::isfinite(alpha_grad);
  if (!finite) {
    L.skipped = true;
    ++s.incidents;
    return L;
  }

  s.opt_c1.step(s.critic1, g1);
  s.opt_c2.step(s.critic2, g2);
  s.opt_actor.step(s.actor, ga);

  // Scalar Adam on log_alpha.
  ++s.alpha_t;
  s.alpha_m = 0.9 * s.alpha_m + 0.1 * alpha_grad;
  s.alpha_v = 0.999 * s.alpha_v + 0.001 * alpha_grad * alpha_grad;
  const double m_hat = s.alpha_m / (1.0 - std::pow(0.9, double(s.alpha_t)));
  const double v_hat = s.alpha_v / (1.0 - std::pow(0.999, double(s.alpha_t)));
  s.log_alpha -= s.hp.lr * m_hat / (std::sqrt(v_hat) + 1e-8);
  // Keep the temperature in a sane band; runaway alpha only destabilizes.
  s.log_alpha = std::clamp(s.log_alpha, -10.0, 5.0);

  ++s.update_count;
  if (s.update_count % s.hp.target_interval == 0) {
    polyak_update(s.target1, s.critic1, s.hp.tau);
    polyak_update(s.target2, s.critic2, s.hp.tau);
  }
  return L;
}

}  // namespace gapflight
