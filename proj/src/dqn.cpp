#include "eqrl/dqn.hpp"

#include <cmath>
#include <stdexcept>

namespace eqrl {

double EpsSchedule::operator()(double tau, double s) const {
  if (kind == Kind::Exponential) return (eps_i - eps_f) * std::exp(-tau / T_eps) + eps_f;
  return (eps_i - eps_f) * std::pow(1.0 - s, alpha) + eps_f;
}

double LrSchedule::operator()(double s) const {
  if (kind == Kind::Fixed) return eta;
  return (eta_i - eta_f) * std::pow(1.0 - s, alpha) + eta_f;
}

int masked_argmax(const Eigen::VectorXd& q, const std::vector<char>& mask) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(mask.size()); ++i) {
    if (mask[i] && (best < 0 || q(i) > q(best))) best = i;
  }
  if (best < 0) throw std::invalid_argument("empty action mask");
  return best;
}

int select_action(const Eigen::VectorXd& q, const std::vector<char>& mask, double eps, Rng& rng) {
  if (eps > 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < eps) {
      std::vector<int> valid;
      for (int i = 0; i < static_cast<int>(mask.size()); ++i) {
        if (mask[i]) valid.push_back(i);
      }
      if (valid.empty()) throw std::invalid_argument("empty action mask");
      std::uniform_int_distribution<std::size_t> pick(0, valid.size() - 1);
      return valid[pick(rng)];
    }
  }
  return masked_argmax(q, mask);
}

SparseVec SparseVec::from_dense(const std::vector<double>& v) {
  SparseVec s;
  s.size = static_cast<std::uint32_t>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) {
      s.idx.push_back(static_cast<std::uint32_t>(i));
      s.val.push_back(v[i]);
    }
  }
  return s;
}

void SparseVec::scatter_into(double* out) const {
  for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = val[k];
}

std::vector<double> SparseVec::dense() const {
  std::vector<double> v(size, 0.0);
  scatter_into(v.data());
  return v;
}

void ReplayMemory::push(Transition t) {
  if (capacity_ == 0) return;
  if (buf_.size() < capacity_) {
    buf_.push_back(std::move(t));
    next_ = buf_.size() % capacity_;
    return;
  }
  buf_[next_] = std::move(t);
  next_ = (next_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayMemory::sample(std::size_t n, Rng& rng) const {
  if (buf_.empty()) throw std::logic_error("sampling an empty replay memory");
  std::uniform_int_distribution<std::size_t> pick(0, buf_.size() - 1);
  std::vector<const Transition*> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(&buf_[pick(rng)]);
  return out;
}

double bellman_target(const Transition& t, const Mlp& online, const Mlp& target, double gamma) {
  if (t.terminal) return t.r;
  std::vector<double> s = t.s_next.dense();
  Eigen::Map<const Eigen::VectorXd> x(s.data(), static_cast<Eigen::Index>(s.size()));
  int a = masked_argmax(online.forward(x), t.mask_next);
  return t.r + gamma * target.forward(x)(a);
}

DqnAgent::DqnAgent(std::vector<int> sizes, DqnConfig cfg, std::uint64_t seed)
    : cfg_(cfg), online_(sizes, seed), target_(online_), replay_(cfg.M) {}

Eigen::VectorXd DqnAgent::q_values(const std::vector<double>& state) const {
  Eigen::Map<const Eigen::VectorXd> x(state.data(), static_cast<Eigen::Index>(state.size()));
  return online_.forward(x);
}

int DqnAgent::act(const std::vector<double>& state, const std::vector<char>& mask, double eps, Rng& rng) const {
  return select_action(q_values(state), mask, eps, rng);
}

double DqnAgent::learn(double eta, Rng& rng) {
  auto batch = replay_.sample(cfg_.B, rng);
  const auto B = static_cast<Eigen::Index>(batch.size());
  const Eigen::Index d = online_.input_size();
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(d, B);
  std::vector<int> actions(batch.size());
  Eigen::VectorXd y(B);
  std::vector<Eigen::Index> live;
  for (Eigen::Index i = 0; i < B; ++i) {
    const Transition& t = *batch[i];
    t.s.scatter_into(X.col(i).data());
    actions[i] = t.a;
    y(i) = t.r;
    if (!t.terminal) live.push_back(i);
  }
  if (!live.empty()) {
    Eigen::MatrixXd Xn = Eigen::MatrixXd::Zero(d, static_cast<Eigen::Index>(live.size()));
    for (std::size_t k = 0; k < live.size(); ++k) batch[live[k]]->s_next.scatter_into(Xn.col(k).data());
    Eigen::MatrixXd qo = online_.forward_batch(Xn);
    Eigen::MatrixXd qt = target_.forward_batch(Xn);
    for (std::size_t k = 0; k < live.size(); ++k) {
      const Transition& t = *batch[live[k]];
      int a = masked_argmax(qo.col(k), t.mask_next);
      y(live[k]) += cfg_.gamma * qt(a, k);
    }
  }
  double loss = online_.train_step(X, actions, y, eta, cfg_.mu);
  ++updates_;
  if (cfg_.tau_hat > 0 && updates_ % static_cast<std::uint64_t>(cfg_.tau_hat) == 0) {
    target_.blend_from(online_, cfg_.eps_hat);
  }
  return loss;
}

}  // namespace eqrl
