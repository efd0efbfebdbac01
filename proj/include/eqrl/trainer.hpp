#pragma once

#include "eqrl/dqn.hpp"
#include "eqrl/encoder.hpp"
#include "eqrl/environment.hpp"
#include "eqrl/policy.hpp"

#include <deque>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace eqrl {

using TaskSource = std::function<Equation(Rng&)>;

// Fraction of successes among the last `length` episodes; 0 until the
// window has filled once.
class SuccessWindow {
 public:
  explicit SuccessWindow(std::size_t length = 100) : length_(length) {}
  void push(bool success);
  double rate() const;
  std::size_t count() const { return hist_.size(); }

 private:
  std::size_t length_;
  std::size_t hits_ = 0;
  std::deque<bool> hist_;
};

struct EvalSet {
  std::string name;
  std::vector<Equation> eqs;
};

struct TrainOptions {
  std::uint64_t epochs = 1000000;
  std::uint64_t eval_every = 10000;
  std::uint64_t checkpoint_every = 10000;
  double target_success = 0.0;  // 0 disables early stopping
  std::uint64_t seed = 1;
  int workers = 1;
  std::size_t window = 100;
  std::string out_dir;  // checkpoints go here when nonempty
  std::string ckpt_prefix = "solver";
};

struct SetScore {
  double success = 0.0;
  double avg_steps = 0.0;
  bool avg_reported = false;
};

struct MetricsRow {
  std::uint64_t epoch = 0;
  std::uint64_t episodes = 0;
  std::vector<SetScore> scores;
  double loss = 0.0;  // mean loss since the previous row
  double eps = 0.0;
  double eta = 0.0;
};

std::string metrics_header(const std::vector<EvalSet>& sets);
std::string metrics_line(const MetricsRow& row);

struct TrainSummary {
  std::uint64_t epochs = 0;
  std::uint64_t episodes = 0;
  std::vector<MetricsRow> rows;
  bool reached_target = false;
};

// Scores a network greedily on every set; workers only affect wall time.
std::vector<SetScore> score_sets(const Environment& env, const Mlp& net, const std::vector<EvalSet>& sets,
                                 std::uint64_t seed, int workers);

class Trainer {
 public:
  Trainer(const EnvConfig& env, const DqnConfig& dqn, const std::vector<int>& hidden, TaskSource tasks,
          TrainOptions opt);

  const Environment& env() const { return env_; }
  const EncoderLayout& layout() const { return layout_; }
  DqnAgent& agent() { return agent_; }
  std::uint64_t episodes() const { return episodes_; }
  double success_window() const { return window_.rate(); }
  double epsilon() const;
  double eta() const;

  // One exploration step; starts a new episode when none is live.
  void explore_step();
  // p exploration steps plus one update once replay holds a batch.
  // Returns true when an update happened.
  bool epoch(double& loss);

  TrainSummary run(const std::vector<EvalSet>& evals, std::ostream* metrics);

 private:
  Environment env_;
  EncoderLayout layout_;
  DqnAgent agent_;
  TaskSource tasks_;
  TrainOptions opt_;
  Rng rng_;
  SuccessWindow window_;
  bool live_ = false;
  EnvState st_;
  std::vector<double> x_;
  std::uint64_t episodes_ = 0;
};

}  // namespace eqrl
