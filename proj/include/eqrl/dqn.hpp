#pragma once

#include "eqrl/neural.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace eqrl {

using Rng = std::mt19937_64;

struct EpsSchedule {
  enum class Kind { Exponential, Adaptive } kind = Kind::Exponential;
  double eps_i = 1.0;
  double eps_f = 0.1;
  double T_eps = 5e6;
  double alpha = 1.0;

  // tau drives the exponential form, s the adaptive one.
  double operator()(double tau, double s) const;
};

struct LrSchedule {
  enum class Kind { Fixed, Adaptive } kind = Kind::Fixed;
  double eta = 0.05;
  double eta_i = 0.05;
  double eta_f = 0.005;
  double alpha = 0.5;

  double operator()(double s) const;
};

// Masked epsilon-greedy choice; ties go to the lowest index. No random draw
// happens when eps == 0.
int select_action(const Eigen::VectorXd& q, const std::vector<char>& mask, double eps, Rng& rng);
int masked_argmax(const Eigen::VectorXd& q, const std::vector<char>& mask);

struct SparseVec {
  std::uint32_t size = 0;
  std::vector<std::uint32_t> idx;
  std::vector<double> val;

  static SparseVec from_dense(const std::vector<double>& v);
  void scatter_into(double* out) const;  // out must hold `size` zeros
  std::vector<double> dense() const;
};

struct Transition {
  SparseVec s;
  int a = 0;
  double r = 0.0;
  bool terminal = true;
  SparseVec s_next;             // unused when terminal
  std::vector<char> mask_next;  // unused when terminal
};

class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity) : capacity_(capacity) {}
  void push(Transition t);
  std::size_t size() const { return buf_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const { return buf_[i]; }
  // Index of the oldest entry.
  std::size_t oldest() const { return buf_.size() < capacity_ ? 0 : next_; }
  std::vector<const Transition*> sample(std::size_t n, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> buf_;
};

struct DqnConfig {
  double gamma = 0.9;
  std::size_t M = 500000;
  std::size_t B = 128;
  int p = 4;
  int tau_hat = 100;
  double eps_hat = 1.0;
  double mu = 0.0;
  EpsSchedule eps;
  LrSchedule lr;
};

// r for terminal transitions, else r + gamma [target(s')]_{a'} with a' the
// masked argmax of the online net on s'.
double bellman_target(const Transition& t, const Mlp& online, const Mlp& target, double gamma);

// Online/target pair plus replay; shared by the equation trainer, the
// co-training loop and the tabular tests.
class DqnAgent {
 public:
  DqnAgent(std::vector<int> sizes, DqnConfig cfg, std::uint64_t seed);

  const DqnConfig& config() const { return cfg_; }
  Mlp& online() { return online_; }
  Mlp& target() { return target_; }
  const Mlp& online() const { return online_; }
  ReplayMemory& replay() { return replay_; }
  std::uint64_t updates() const { return updates_; }

  Eigen::VectorXd q_values(const std::vector<double>& state) const;
  int act(const std::vector<double>& state, const std::vector<char>& mask, double eps, Rng& rng) const;
  void remember(Transition t) { replay_.push(std::move(t)); }
  bool ready() const { return replay_.size() >= cfg_.B; }
  // One epoch of learning: batch update, then the periodic target blend.
  double learn(double eta, Rng& rng);

 private:
  DqnConfig cfg_;
  Mlp online_;
  Mlp target_;
  ReplayMemory replay_;
  std::uint64_t updates_ = 0;
};

}  // namespace eqrl
