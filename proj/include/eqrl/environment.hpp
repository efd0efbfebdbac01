#pragma once

#include "eqrl/simplify.hpp"
#include "eqrl/units.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace eqrl {

struct EnvConfig {
  int S = 5;
  int T = 5;
  int O_eq = 2;  // 3 adds both-sides exponentiation
  int O_st = 3;
  std::vector<Number> constants{Number(0), Number(1), Number(-1)};
  bool symbolic = false;
  bool complex = false;
  int t_max = 100;
  double r_slv = 3.0;
  double r_so = -0.25;
  double p_st = 1.0;
  double p_as = 0.25;
  std::size_t simplify_budget = 10000;
  bool shuffle = true;
  // Encoder options.
  bool imag_row = false;
  long cap = 500;
  double scale = 100.0;
  // Generator agents get a trailing Submit action.
  bool generator = false;
  double r_fool = 3.0;
  double p_step = 0.01;
  // Output width listed by a preset when it differs from action_count().
  int A_listed = 0;

  int action_count() const {
    return 2 * T + O_eq + static_cast<int>(constants.size()) + O_st + (generator ? 1 : 0);
  }
  int output_width() const { return std::max(action_count(), A_listed); }
  NormalizeOptions normalize_options() const;
  // Throws std::invalid_argument listing every violated constraint.
  void validate() const;
};

enum class ActionKind { CopyLHS, CopyRHS, EqOp, PushConst, StackOp, Submit, Padding };

struct Action {
  ActionKind kind;
  int arg = 0;  // copy position (1-based), constant index, or operator index
};

// Index layout: [CopyLHS 1..T][CopyRHS 1..T][EqOp][PushConst][StackOp][Submit][padding].
Action decode_action(int index, const EnvConfig& cfg);
int encode_action(const Action& a, const EnvConfig& cfg);
std::string action_name(int index, const EnvConfig& cfg);

enum class Terminal { None, Solved, Eliminated, Timeout, Bad, StepLimit, Submitted };
const char* terminal_name(Terminal t);

enum class Event { Normal, StackOverflow, Solved, Eliminated, Timeout, Bad, StepLimit, Submitted };

struct EnvState {
  Equation eq;
  std::vector<Expr> stack;  // index 0 is the top
  std::vector<Expr> assumptions;
  int steps = 0;
  bool digit_streak = false;
  Terminal terminal = Terminal::None;
  Expr solution;
};

struct StepOutcome {
  double reward = 0.0;
  bool terminal = false;
  Event event = Event::Normal;
};

// Term fits into a feature plane: at most T units, every number within cap.
bool representable(const Expr& e, const EnvConfig& cfg);

class Environment {
 public:
  explicit Environment(EnvConfig cfg) : cfg_(std::move(cfg)) {}

  const EnvConfig& config() const { return cfg_; }

  EnvState reset(const Equation& eq, Rng& rng) const;
  std::vector<char> valid_actions(const EnvState& st) const;
  std::pair<EnvState, StepOutcome> step(const EnvState& st, int action, Rng& rng) const;
  double final_reward(std::size_t n_st, std::size_t n_as) const;

 private:
  Expr norm(const Expr& e, Rng& rng) const;
  void add_assumption(EnvState& st, const Expr& g, Rng& rng) const;
  void settle(EnvState& st, StepOutcome& out) const;

  EnvConfig cfg_;
};

double final_reward(std::size_t n_st, std::size_t n_as, const EnvConfig& cfg);

// One line of an episode trace.
struct TraceRecord {
  int step = 0;
  std::string action;
  std::string lhs;
  std::string rhs;
  std::vector<std::string> stack;
  std::vector<std::string> assumptions;
  double reward = 0.0;
  std::string terminal;
};

TraceRecord make_record(const EnvState& st, std::string action, double reward);
std::string to_json_line(const TraceRecord& r);
TraceRecord record_from_json(const std::string& line);

}  // namespace eqrl
