#pragma once

#include "eqrl/config.hpp"
#include "eqrl/trainer.hpp"

#include <functional>
#include <iosfwd>
#include <optional>

namespace eqrl {

// AR: a rational a with p in [-50,50], q in [1,10]. AS1: (a1 + b1 c)/(a2 + b2 c)
// with the same coefficients, b_i zeroed with probability 1/2; a zero
// denominator is redrawn.
Expr sample_seed_solution(SeedFamily family, Rng& rng);

// "x = seed" on a generator environment. The seed is returned through `seed`.
EnvState generator_reset(const Environment& gen, SeedFamily family, Rng& rng, Expr* seed = nullptr);

// Terminal generator reward: r_fool if the solver failed, minus the stack
// and assumption penalties.
double submit_reward(bool solver_failed, std::size_t n_st, std::size_t n_as, const EnvConfig& gen);

// Greedy solver run on a submitted task; true means the solver failed.
using SolverJudge = std::function<bool(const Equation&, Rng&)>;

struct GeneratorStep {
  EnvState next;
  StepOutcome out;
  bool submitted = false;
  bool solver_failed = false;
};

GeneratorStep generator_step(const Environment& gen, const EnvState& st, int action, const SolverJudge& judge,
                             Rng& rng);

// Independent check of a submission: linear in x, x not eliminated, and the
// seed solves it at sampled values of c that keep every assumption nonzero.
bool submission_consistent(const Equation& eq, const Expr& seed, const std::vector<Expr>& assumptions, Rng& rng);

struct CoTrainOptions {
  std::uint64_t episodes = 100000;
  std::uint64_t eval_every = 1000;  // episodes
  std::uint64_t checkpoint_every = 0;
  std::uint64_t seed = 1;
  int workers = 1;
  std::size_t window = 100;
  std::string out_dir;
  bool check_submissions = true;
};

struct GeneratedTask {
  std::uint64_t episode = 0;
  Expr seed;
  int gen_steps = 0;
  Terminal gen_terminal = Terminal::None;
  bool submitted = false;
  Equation equation;
  std::vector<Expr> assumptions;
  bool solver_failed = false;
  double gen_reward = 0.0;  // summed over the generator episode
  bool consistent = true;   // oracle verdict, submitted tasks only
};

std::string task_log_line(const GeneratedTask& t);

struct CoTrainSummary {
  std::uint64_t episodes = 0;
  std::uint64_t submitted = 0;
  std::uint64_t inconsistent = 0;
  std::uint64_t fooled = 0;
};

class CoTrainer {
 public:
  CoTrainer(const AgentSpec& solver, const AgentSpec& generator, SeedFamily family, CoTrainOptions opt);

  // Replaces the learned solver by a fixed judge; the solver stops training.
  void freeze_solver(SolverJudge judge) { frozen_ = std::move(judge); }

  GeneratedTask episode();
  CoTrainSummary run(const std::vector<EvalSet>& evals, std::ostream* metrics, std::ostream* task_log);

  DqnAgent& solver() { return solver_; }
  DqnAgent& generator() { return generator_; }
  const Environment& solver_env() const { return solver_env_; }
  const Environment& generator_env() const { return gen_env_; }
  double generator_s() const;
  double solver_s() const { return solver_window_.rate(); }
  double valid_rate() const { return valid_window_.rate(); }
  double fool_rate() const { return fool_window_.rate(); }

 private:
  bool greedy_solver_fails(const Equation& eq, Rng& rng);
  void train_solver_on(const Equation& eq);
  void push(DqnAgent& agent, int& since, const EncoderLayout& layout, const std::vector<double>& x, int a,
            const StepOutcome& out, const Environment& env, const EnvState& next, double s);

  Environment solver_env_;
  Environment gen_env_;
  EncoderLayout solver_layout_;
  EncoderLayout gen_layout_;
  DqnAgent solver_;
  DqnAgent generator_;
  SeedFamily family_;
  CoTrainOptions opt_;
  Rng rng_;
  SolverJudge frozen_;
  SuccessWindow solver_window_;
  SuccessWindow valid_window_;
  SuccessWindow fool_window_;
  int solver_since_ = 0;
  int gen_since_ = 0;
  std::uint64_t episodes_ = 0;
};

}  // namespace eqrl
