#pragma once

#include "eqrl/encoder.hpp"
#include "eqrl/environment.hpp"
#include "eqrl/neural.hpp"

#include <deque>
#include <functional>
#include <memory>
#include <vector>

namespace eqrl {

class Policy {
 public:
  virtual ~Policy() = default;
  virtual void begin_episode() {}
  virtual int choose(const Environment& env, const EnvState& st, const std::vector<char>& mask) = 0;
};

// Greedy masked argmax of a network.
class NetPolicy : public Policy {
 public:
  NetPolicy(const Mlp& net, EncoderLayout layout) : net_(net), layout_(layout) {}
  int choose(const Environment& env, const EnvState& st, const std::vector<char>& mask) override;

 private:
  const Mlp& net_;
  EncoderLayout layout_;
};

// Hand-written solver for linear equations: moves x-terms off the RHS,
// subtracts constant terms on the LHS, then divides by each coefficient
// factor. Serves as an oracle for the evaluation harness.
class ScriptedPolicy : public Policy {
 public:
  void begin_episode() override { plan_.clear(); }
  int choose(const Environment& env, const EnvState& st, const std::vector<char>& mask) override;

 private:
  void plan(const Environment& env, const EnvState& st);
  std::deque<int> plan_;
};

struct EpisodeResult {
  Terminal terminal = Terminal::None;
  int steps = 0;
  double total_reward = 0.0;
  Expr solution;
  Equation final_eq;
  std::vector<TraceRecord> trace;  // step 0 is the start state

  bool success() const { return terminal == Terminal::Solved || terminal == Terminal::Eliminated; }
};

EpisodeResult run_episode(const Environment& env, Policy& policy, const Equation& eq, Rng& rng, bool record_trace);

struct EvalResult {
  double success_rate = 0.0;
  double avg_steps = 0.0;   // over successes
  bool avg_reported = false;  // success rate >= 2%
  std::vector<EpisodeResult> outcomes;  // dataset order, traces omitted
};

using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

// Greedy evaluation. Equation i gets its own rng stream derived from
// (seed, i); workers only change wall time, never results.
EvalResult evaluate(const Environment& env, const PolicyFactory& make_policy, const std::vector<Equation>& dataset,
                    std::uint64_t seed, int workers = 1);

Rng episode_rng(std::uint64_t seed, std::uint64_t index);

}  // namespace eqrl
