#include "eqrl/environment.hpp"

#include "json.hpp"

#include <sstream>
#include <stdexcept>

namespace eqrl {

namespace {

const char kOps[] = {'+', '*', '^'};
const char* kOpNames[] = {"add", "mul", "pow"};

bool is_nonzero_integer(const Expr& e) {
  return e.is_number() && e.value().is_integer() && !e.value().is_zero();
}

bool mentions_complex(const Expr& e) {
  if (e.is_number()) return !e.value().is_real();
  for (const auto& c : e.children()) {
    if (mentions_complex(c)) return true;
  }
  return false;
}

}  // namespace

NormalizeOptions EnvConfig::normalize_options() const {
  NormalizeOptions o;
  o.expand = complex || symbolic;
  o.cancel = symbolic;
  o.shuffle = shuffle;
  o.budget = simplify_budget;
  return o;
}

void EnvConfig::validate() const {
  std::vector<std::string> errs;
  if (S < 1) errs.emplace_back("S must be >= 1");
  if (T < 1) errs.emplace_back("T must be >= 1");
  if (t_max < 1) errs.emplace_back("t_max must be >= 1");
  if (O_eq < 2 || O_eq > 3) errs.emplace_back("O_eq must be 2 or 3");
  if (O_st != 3) errs.emplace_back("O_st must be 3");
  if (constants.empty()) errs.emplace_back("constants must be nonempty");
  bool has_i = false;
  for (const auto& c : constants) has_i = has_i || c == Number::imaginary_unit();
  if (complex && !has_i) errs.emplace_back("complex configurations need I among the constants");
  if (!complex && has_i) errs.emplace_back("I is a constant but complex = false");
  if (A_listed != 0 && A_listed < action_count()) errs.emplace_back("A_listed is smaller than the action count");
  if (cap <= 0 || scale <= 0) errs.emplace_back("cap and scale must be positive");
  if (errs.empty()) return;
  std::string msg;
  for (const auto& e : errs) msg += (msg.empty() ? "" : "; ") + e;
  throw std::invalid_argument(msg);
}

Action decode_action(int index, const EnvConfig& cfg) {
  if (index < 0 || index >= cfg.output_width()) throw std::out_of_range("action index out of range");
  int i = index;
  if (i < cfg.T) return {ActionKind::CopyLHS, i + 1};
  i -= cfg.T;
  if (i < cfg.T) return {ActionKind::CopyRHS, i + 1};
  i -= cfg.T;
  if (i < cfg.O_eq) return {ActionKind::EqOp, i};
  i -= cfg.O_eq;
  int nc = static_cast<int>(cfg.constants.size());
  if (i < nc) return {ActionKind::PushConst, i};
  i -= nc;
  if (i < cfg.O_st) return {ActionKind::StackOp, i};
  i -= cfg.O_st;
  if (cfg.generator && i == 0) return {ActionKind::Submit, 0};
  return {ActionKind::Padding, i};
}

int encode_action(const Action& a, const EnvConfig& cfg) {
  int nc = static_cast<int>(cfg.constants.size());
  switch (a.kind) {
    case ActionKind::CopyLHS:
      return a.arg - 1;
    case ActionKind::CopyRHS:
      return cfg.T + a.arg - 1;
    case ActionKind::EqOp:
      return 2 * cfg.T + a.arg;
    case ActionKind::PushConst:
      return 2 * cfg.T + cfg.O_eq + a.arg;
    case ActionKind::StackOp:
      return 2 * cfg.T + cfg.O_eq + nc + a.arg;
    case ActionKind::Submit:
      return 2 * cfg.T + cfg.O_eq + nc + cfg.O_st;
    case ActionKind::Padding:
      return cfg.action_count() + a.arg;
  }
  return -1;
}

std::string action_name(int index, const EnvConfig& cfg) {
  Action a = decode_action(index, cfg);
  switch (a.kind) {
    case ActionKind::CopyLHS:
      return "copy_lhs(" + std::to_string(a.arg) + ")";
    case ActionKind::CopyRHS:
      return "copy_rhs(" + std::to_string(a.arg) + ")";
    case ActionKind::EqOp:
      return std::string("eq_") + kOpNames[a.arg];
    case ActionKind::PushConst:
      return "push(" + cfg.constants[a.arg].to_string() + ")";
    case ActionKind::StackOp:
      return std::string("stack_") + kOpNames[a.arg];
    case ActionKind::Submit:
      return "submit";
    case ActionKind::Padding:
      return "unused(" + std::to_string(a.arg) + ")";
  }
  return "?";
}

const char* terminal_name(Terminal t) {
  switch (t) {
    case Terminal::None: return "none";
    case Terminal::Solved: return "solved";
    case Terminal::Eliminated: return "eliminated";
    case Terminal::Timeout: return "timeout";
    case Terminal::Bad: return "bad";
    case Terminal::StepLimit: return "step_limit";
    case Terminal::Submitted: return "submitted";
  }
  return "?";
}

bool representable(const Expr& e, const EnvConfig& cfg) {
  auto units = enumerate_units(e);
  if (units.size() > static_cast<std::size_t>(cfg.T)) return false;
  for (const auto& u : units) {
    if (u.kind == UnitKind::Number && !u.value.fits_within(cfg.cap)) return false;
  }
  return true;
}

double final_reward(std::size_t n_st, std::size_t n_as, const EnvConfig& cfg) {
  return cfg.r_slv - static_cast<double>(n_st) / cfg.S * cfg.p_st - static_cast<double>(n_as) * cfg.p_as;
}

double Environment::final_reward(std::size_t n_st, std::size_t n_as) const {
  return eqrl::final_reward(n_st, n_as, cfg_);
}

Expr Environment::norm(const Expr& e, Rng& rng) const { return normalize(e, cfg_.normalize_options(), rng); }

void Environment::add_assumption(EnvState& st, const Expr& g, Rng& rng) const {
  NormalizeOptions o = cfg_.normalize_options();
  o.shuffle = false;
  Expr canon = canonical_sort(normalize(g, o, rng));
  if (!canon.has_symbols()) return;
  for (const auto& a : st.assumptions) {
    if (a == canon) return;
  }
  st.assumptions.push_back(canon);
}

void Environment::settle(EnvState& st, StepOutcome& out) const {
  if (!cfg_.generator) {
    SolvedStatus cls = classify(st.eq);
    if (cls.kind != SolvedKind::Unsolved) {
      bool solved = cls.kind == SolvedKind::Solved;
      st.terminal = solved ? Terminal::Solved : Terminal::Eliminated;
      st.solution = cls.solution;
      out.terminal = true;
      out.event = solved ? Event::Solved : Event::Eliminated;
      out.reward += final_reward(st.stack.size(), st.assumptions.size());
      return;
    }
  }
  bool ok = representable(st.eq.lhs, cfg_) && representable(st.eq.rhs, cfg_);
  for (const auto& s : st.stack) ok = ok && representable(s, cfg_);
  if (!ok) {
    st.terminal = Terminal::Bad;
    out.terminal = true;
    out.event = Event::Bad;
    return;
  }
  if (st.steps >= cfg_.t_max) {
    st.terminal = Terminal::StepLimit;
    out.terminal = true;
    out.event = Event::StepLimit;
  }
}

EnvState Environment::reset(const Equation& eq, Rng& rng) const {
  bool has_c = eq.lhs.contains_symbol("c") || eq.rhs.contains_symbol("c");
  if (has_c && !cfg_.symbolic) throw std::invalid_argument("equation uses c but the configuration is not symbolic");
  if (!cfg_.complex && (mentions_complex(eq.lhs) || mentions_complex(eq.rhs))) {
    throw std::invalid_argument("equation has complex coefficients but the configuration is real");
  }
  EnvState st;
  StepOutcome dummy;
  try {
    st.eq = {norm(eq.lhs, rng), norm(eq.rhs, rng)};
  } catch (const BudgetExceeded&) {
    st.eq = eq;
    st.terminal = Terminal::Timeout;
    return st;
  } catch (const DomainError&) {
    st.eq = eq;
    st.terminal = Terminal::Bad;
    return st;
  }
  settle(st, dummy);
  if (st.terminal == Terminal::StepLimit) st.terminal = Terminal::None;
  return st;
}

std::vector<char> Environment::valid_actions(const EnvState& st) const {
  if (st.terminal != Terminal::None) throw std::logic_error("valid_actions on a terminal state");
  std::vector<char> m(static_cast<std::size_t>(cfg_.output_width()), 0);
  const std::size_t nl = enumerate_units(st.eq.lhs).size();
  const std::size_t nr = enumerate_units(st.eq.rhs).size();
  const int T = cfg_.T;
  for (int n = 1; n <= T; ++n) {
    m[n - 1] = static_cast<std::size_t>(n) <= nl;
    m[T + n - 1] = static_cast<std::size_t>(n) <= nr;
  }
  const std::size_t depth = st.stack.size();
  for (int i = 0; i < cfg_.O_eq; ++i) {
    bool ok = depth >= 1;
    if (ok && i == 1) ok = !st.stack[0].is_number(0);
    if (ok && i == 2) ok = is_nonzero_integer(st.stack[0]);
    m[encode_action({ActionKind::EqOp, i}, cfg_)] = ok;
  }
  for (std::size_t k = 0; k < cfg_.constants.size(); ++k) {
    m[encode_action({ActionKind::PushConst, static_cast<int>(k)}, cfg_)] = 1;
  }
  for (int i = 0; i < cfg_.O_st; ++i) {
    bool ok = depth >= 2;
    if (ok && i == 2) ok = !st.stack[1].is_number(0) && is_nonzero_integer(st.stack[0]);
    m[encode_action({ActionKind::StackOp, i}, cfg_)] = ok;
  }
  if (cfg_.generator) m[encode_action({ActionKind::Submit, 0}, cfg_)] = is_linear_in(st.eq);
  return m;
}

std::pair<EnvState, StepOutcome> Environment::step(const EnvState& st, int action, Rng& rng) const {
  if (st.terminal != Terminal::None) throw std::logic_error("step on a terminal state");
  auto mask = valid_actions(st);
  if (action < 0 || action >= static_cast<int>(mask.size()) || !mask[action]) {
    throw std::invalid_argument("invalid action " + std::to_string(action));
  }
  EnvState next = st;
  next.steps += 1;
  StepOutcome out;
  auto push = [&](Expr e) {
    if (next.stack.size() >= static_cast<std::size_t>(cfg_.S)) {
      next.stack.pop_back();
      out.reward += cfg_.r_so;
      out.event = Event::StackOverflow;
    }
    next.stack.insert(next.stack.begin(), std::move(e));
  };
  Action a = decode_action(action, cfg_);
  bool streak = false;
  try {
    switch (a.kind) {
      case ActionKind::CopyLHS:
        push(subterm_at(st.eq.lhs, a.arg));
        break;
      case ActionKind::CopyRHS:
        push(subterm_at(st.eq.rhs, a.arg));
        break;
      case ActionKind::PushConst: {
        const Number& v = cfg_.constants[a.arg];
        bool digit = v.is_zero() || v.is_one();
        if (digit && st.digit_streak && !next.stack.empty() && next.stack[0].is_number() &&
            next.stack[0].value().is_integer()) {
          next.stack[0] = Expr::number(next.stack[0].value() * Number(2) + v);
        } else {
          push(Expr::number(v));
        }
        streak = digit;
        break;
      }
      case ActionKind::StackOp: {
        Expr top = next.stack[0];
        Expr second = next.stack[1];
        next.stack.erase(next.stack.begin(), next.stack.begin() + 2);
        Expr r;
        if (a.arg == 0) {
          r = norm(Expr::add({second, top}), rng);
        } else if (a.arg == 1) {
          r = norm(Expr::mul({second, top}), rng);
        } else {
          if (top.value().is_negative_real() && second.has_symbols()) add_assumption(next, second, rng);
          r = norm(Expr::pow(second, top), rng);
        }
        push(r);
        break;
      }
      case ActionKind::EqOp: {
        Expr g = next.stack[0];
        next.stack.erase(next.stack.begin());
        Expr lhs = next.eq.lhs;
        Expr rhs = next.eq.rhs;
        if (a.arg == 0) {
          next.eq = {norm(Expr::add({lhs, g}), rng), norm(Expr::add({rhs, g}), rng)};
        } else if (a.arg == 1) {
          if (g.has_symbols()) add_assumption(next, g, rng);
          next.eq = {norm(Expr::mul({lhs, g}), rng), norm(Expr::mul({rhs, g}), rng)};
        } else {
          if (g.value().is_negative_real()) {
            if (lhs.has_symbols()) add_assumption(next, lhs, rng);
            if (rhs.has_symbols()) add_assumption(next, rhs, rng);
          }
          next.eq = {norm(Expr::pow(lhs, g), rng), norm(Expr::pow(rhs, g), rng)};
        }
        break;
      }
      case ActionKind::Submit:
        next.terminal = Terminal::Submitted;
        next.digit_streak = false;
        out.terminal = true;
        out.event = Event::Submitted;
        return {std::move(next), out};
      case ActionKind::Padding:
        throw std::logic_error("padding action executed");
    }
    next.digit_streak = streak;
    settle(next, out);
  } catch (const BudgetExceeded&) {
    next.terminal = Terminal::Timeout;
    next.digit_streak = false;
    out.terminal = true;
    out.event = Event::Timeout;
  } catch (const DomainError&) {
    next.terminal = Terminal::Bad;
    next.digit_streak = false;
    out.terminal = true;
    out.event = Event::Bad;
  }
  if (cfg_.generator) out.reward -= cfg_.p_step;
  return {std::move(next), out};
}

TraceRecord make_record(const EnvState& st, std::string action, double reward) {
  TraceRecord r;
  r.step = st.steps;
  r.action = std::move(action);
  r.lhs = render_infix(st.eq.lhs);
  r.rhs = render_infix(st.eq.rhs);
  for (const auto& s : st.stack) r.stack.push_back(render_infix(s));
  for (const auto& a : st.assumptions) r.assumptions.push_back(render_infix(a) + " != 0");
  r.reward = reward;
  r.terminal = terminal_name(st.terminal);
  return r;
}

std::string to_json_line(const TraceRecord& r) {
  nlohmann::json j;
  j["step"] = r.step;
  j["action"] = r.action;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["stack"] = r.stack;
  j["assumptions"] = r.assumptions;
  j["reward"] = r.reward;
  j["terminal"] = r.terminal;
  return j.dump();
}

TraceRecord record_from_json(const std::string& line) {
  auto j = nlohmann::json::parse(line);
  TraceRecord r;
  r.step = j.at("step").get<int>();
  r.action = j.at("action").get<std::string>();
  r.lhs = j.at("lhs").get<std::string>();
  r.rhs = j.at("rhs").get<std::string>();
  r.stack = j.at("stack").get<std::vector<std::string>>();
  r.assumptions = j.at("assumptions").get<std::vector<std::string>>();
  r.reward = j.at("reward").get<double>();
  r.terminal = j.at("terminal").get<std::string>();
  return r;
}

}  // namespace eqrl
