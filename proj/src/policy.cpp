#include "eqrl/policy.hpp"

#include "eqrl/dqn.hpp"

#include <atomic>
#include <thread>

namespace eqrl {

int NetPolicy::choose(const Environment&, const EnvState& st, const std::vector<char>& mask) {
  auto x = encode_state(st, layout_);
  if (!x) throw std::logic_error("live state could not be encoded");
  Eigen::Map<const Eigen::VectorXd> in(x->data(), static_cast<Eigen::Index>(x->size()));
  return masked_argmax(net_.forward(in), mask);
}

namespace {

std::optional<int> find_unit(const Expr& side, const Expr& target) {
  auto units = enumerate_units(side);
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (units[i].anchor == target) return static_cast<int>(i + 1);
  }
  return std::nullopt;
}

std::vector<Expr> terms_of(const Expr& e) {
  if (e.kind() == Kind::Add) return {e.children().begin(), e.children().end()};
  return {e};
}

}  // namespace

void ScriptedPolicy::plan(const Environment& env, const EnvState& st) {
  const EnvConfig& cfg = env.config();
  int minus_one = -1;
  for (std::size_t k = 0; k < cfg.constants.size(); ++k) {
    if (cfg.constants[k] == Number(-1)) minus_one = encode_action({ActionKind::PushConst, static_cast<int>(k)}, cfg);
  }
  const int stack_mul = encode_action({ActionKind::StackOp, 1}, cfg);
  const int stack_pow = encode_action({ActionKind::StackOp, 2}, cfg);
  const int eq_add = encode_action({ActionKind::EqOp, 0}, cfg);
  const int eq_mul = encode_action({ActionKind::EqOp, 1}, cfg);
  if (minus_one < 0) return;

  // Pushes -t onto the equation by copying t from `side`.
  auto remove_term = [&](const Expr& side, const Expr& t, ActionKind copy) {
    if (auto idx = find_unit(side, t)) {
      plan_ = {encode_action({copy, *idx}, cfg), minus_one, stack_mul, eq_add};
      return true;
    }
    if (t.kind() == Kind::Mul && t.children()[0].is_number(-1)) {
      std::vector<Expr> rest(t.children().begin() + 1, t.children().end());
      Expr r = rest.size() == 1 ? rest[0] : Expr::mul(rest);
      if (auto idx = find_unit(side, r)) {
        plan_ = {encode_action({copy, *idx}, cfg), eq_add};
        return true;
      }
    }
    return false;
  };

  const Expr& lhs = st.eq.lhs;
  const Expr& rhs = st.eq.rhs;
  if (rhs.contains_symbol("x")) {
    for (const auto& t : terms_of(rhs)) {
      if (t.contains_symbol("x") && remove_term(rhs, t, ActionKind::CopyRHS)) return;
    }
    return;
  }
  if (lhs.kind() == Kind::Add) {
    for (const auto& t : terms_of(lhs)) {
      if (!t.contains_symbol("x") && remove_term(lhs, t, ActionKind::CopyLHS)) return;
    }
    return;
  }
  if (lhs.kind() == Kind::Mul) {
    for (const auto& f : lhs.children()) {
      if (f.contains_symbol("x")) continue;
      if (auto idx = find_unit(lhs, f)) {
        plan_ = {encode_action({ActionKind::CopyLHS, *idx}, cfg), minus_one, stack_pow, eq_mul};
        return;
      }
    }
  }
}

int ScriptedPolicy::choose(const Environment& env, const EnvState& st, const std::vector<char>& mask) {
  if (plan_.empty()) plan(env, st);
  if (!plan_.empty()) {
    int a = plan_.front();
    plan_.pop_front();
    if (a >= 0 && a < static_cast<int>(mask.size()) && mask[a]) return a;
    plan_.clear();
  }
  for (int i = 0; i < static_cast<int>(mask.size()); ++i) {
    if (mask[i]) return i;
  }
  throw std::logic_error("empty action mask");
}

EpisodeResult run_episode(const Environment& env, Policy& policy, const Equation& eq, Rng& rng, bool record_trace) {
  EpisodeResult res;
  policy.begin_episode();
  EnvState st = env.reset(eq, rng);
  if (record_trace) res.trace.push_back(make_record(st, "start", 0.0));
  while (st.terminal == Terminal::None) {
    auto mask = env.valid_actions(st);
    int a = policy.choose(env, st, mask);
    auto [next, out] = env.step(st, a, rng);
    res.total_reward += out.reward;
    st = std::move(next);
    if (record_trace) res.trace.push_back(make_record(st, action_name(a, env.config()), out.reward));
  }
  res.terminal = st.terminal;
  res.steps = st.steps;
  res.solution = st.solution;
  res.final_eq = st.eq;
  return res;
}

Rng episode_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

EvalResult evaluate(const Environment& env, const PolicyFactory& make_policy, const std::vector<Equation>& dataset,
                    std::uint64_t seed, int workers) {
  EvalResult res;
  res.outcomes.resize(dataset.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    auto policy = make_policy();
    for (std::size_t i = next++; i < dataset.size(); i = next++) {
      Rng rng = episode_rng(seed, i);
      res.outcomes[i] = run_episode(env, *policy, dataset[i], rng, false);
    }
  };
  workers = std::max(1, workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  std::size_t solved = 0;
  double steps = 0.0;
  for (const auto& o : res.outcomes) {
    if (o.success()) {
      ++solved;
      steps += o.steps;
    }
  }
  if (!dataset.empty()) res.success_rate = static_cast<double>(solved) / static_cast<double>(dataset.size());
  res.avg_steps = solved ? steps / static_cast<double>(solved) : 0.0;
  res.avg_reported = res.success_rate >= 0.02;
  return res;
}

}  // namespace eqrl
