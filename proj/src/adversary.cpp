#include "eqrl/adversary.hpp"

#include "eqrl/units.hpp"

#include <filesystem>
#include <ostream>
#include <sstream>

namespace eqrl {

namespace {

SamplerConfig seed_coefficients() {
  SamplerConfig s;
  s.field = Field::Q;
  return s;
}

}  // namespace

Expr sample_seed_solution(SeedFamily family, Rng& rng) {
  SamplerConfig s = seed_coefficients();
  if (family == SeedFamily::Rational) return Expr::number(sample_coefficient(s, rng));
  std::bernoulli_distribution zero(0.5);
  auto linear = [&](Number a, Number b) { return Expr::add({Expr::number(a), Expr::mul({Expr::number(b), Expr::symconst("c")})}); };
  Number a1 = sample_coefficient(s, rng);
  Number b1 = zero(rng) ? Number(0) : sample_coefficient(s, rng);
  Number a2, b2;
  do {
    a2 = sample_coefficient(s, rng);
    b2 = zero(rng) ? Number(0) : sample_coefficient(s, rng);
  } while (a2.is_zero() && b2.is_zero());
  return Expr::mul({linear(a1, b1), Expr::pow(linear(a2, b2), Expr::number(Number(-1)))});
}

EnvState generator_reset(const Environment& gen, SeedFamily family, Rng& rng, Expr* seed) {
  for (;;) {
    Expr q = sample_seed_solution(family, rng);
    EnvState st = gen.reset({Expr::unknown("x"), q}, rng);
    if (st.terminal != Terminal::None) continue;
    if (seed) *seed = q;
    return st;
  }
}

double submit_reward(bool solver_failed, std::size_t n_st, std::size_t n_as, const EnvConfig& gen) {
  return (solver_failed ? gen.r_fool : 0.0) - static_cast<double>(n_st) / gen.S * gen.p_st -
         static_cast<double>(n_as) * gen.p_as;
}

GeneratorStep generator_step(const Environment& gen, const EnvState& st, int action, const SolverJudge& judge,
                             Rng& rng) {
  GeneratorStep r;
  auto [next, out] = gen.step(st, action, rng);
  r.next = std::move(next);
  r.out = out;
  if (r.next.terminal == Terminal::Submitted) {
    r.submitted = true;
    r.solver_failed = judge(r.next.eq, rng);
    r.out.reward = submit_reward(r.solver_failed, r.next.stack.size(), r.next.assumptions.size(), gen.config());
  }
  return r;
}

bool submission_consistent(const Equation& eq, const Expr& seed, const std::vector<Expr>& assumptions, Rng& rng) {
  if (!is_linear_in(eq)) return false;
  bool symbolic = eq.lhs.contains_symbol("c") || eq.rhs.contains_symbol("c") || seed.contains_symbol("c");
  for (const auto& g : assumptions) symbolic = symbolic || g.contains_symbol("c");
  std::uniform_int_distribution<long> num(-97, 97), den(1, 13);
  int checked = 0;
  for (int trial = 0; trial < (symbolic ? 12 : 1); ++trial) {
    Number cv = symbolic ? Number::rational(num(rng), den(rng)) : Number(0);
    auto s = evaluate(seed, Number(0), cv);
    if (!s) continue;
    bool admissible = true;
    for (const auto& g : assumptions) {
      auto gv = evaluate(g, *s, cv);
      admissible = admissible && gv && !gv->is_zero();
    }
    if (!admissible) continue;
    auto f = [&](const Number& xv) -> std::optional<Number> {
      auto l = evaluate(eq.lhs, xv, cv);
      auto r = evaluate(eq.rhs, xv, cv);
      if (!l || !r) return std::nullopt;
      return *l - *r;
    };
    auto f0 = f(Number(0)), f1 = f(Number(1)), fs = f(*s);
    if (!f0 || !f1 || !fs) continue;
    if ((*f1 - *f0).is_zero()) continue;
    if (!fs->is_zero()) return false;
    ++checked;
  }
  return checked > 0;
}

std::string task_log_line(const GeneratedTask& t) {
  std::ostringstream os;
  os << t.episode << '\t' << t.gen_steps << '\t' << terminal_name(t.gen_terminal) << '\t'
     << (t.submitted ? (t.solver_failed ? "fooled" : "solved") : "-") << '\t' << t.gen_reward << '\t'
     << render_infix(t.seed) << '\t' << (t.submitted ? render_equation(t.equation) : std::string("-"));
  return os.str();
}

namespace {

std::vector<int> sizes_for(const AgentSpec& a) { return a.layer_sizes(EncoderLayout::from(a.env).input_size()); }

EnvConfig as_generator(EnvConfig c) {
  c.generator = true;
  return c;
}


}  // namespace

CoTrainer::CoTrainer(const AgentSpec& solver, const AgentSpec& generator, SeedFamily family, CoTrainOptions opt)
    : solver_env_(solver.env),
      gen_env_(as_generator(generator.env)),
      solver_layout_(EncoderLayout::from(solver.env)),
      gen_layout_(EncoderLayout::from(gen_env_.config())),
      solver_(sizes_for(solver), solver.dqn, opt.seed),
      generator_(sizes_for({gen_env_.config(), generator.dqn, generator.hidden, generator.A_listed}), generator.dqn,
                 opt.seed + 1),
      family_(family),
      opt_(std::move(opt)),
      rng_(opt_.seed ^ 0xad7e25a7ULL),
      solver_window_(opt_.window),
      valid_window_(opt_.window),
      fool_window_(opt_.window) {
  solver_env_.config().validate();
  gen_env_.config().validate();
  if (solver_env_.config().symbolic != gen_env_.config().symbolic ||
      solver_env_.config().complex != gen_env_.config().complex) {
    throw std::invalid_argument("solver and generator environments disagree on the coefficient domain");
  }
}

double CoTrainer::generator_s() const { return std::min(valid_window_.rate(), fool_window_.rate()); }

bool CoTrainer::greedy_solver_fails(const Equation& eq, Rng& rng) {
  if (frozen_) return frozen_(eq, rng);
  NetPolicy policy(solver_.online(), solver_layout_);
  EpisodeResult r = run_episode(solver_env_, policy, eq, rng, false);
  return !r.success();
}

void CoTrainer::push(DqnAgent& agent, int& since, const EncoderLayout& layout, const std::vector<double>& x, int a,
                     const StepOutcome& out, const Environment& env, const EnvState& next, double s) {
  Transition t;
  t.s = SparseVec::from_dense(x);
  t.a = a;
  t.r = out.reward;
  t.terminal = out.terminal;
  if (!out.terminal) {
    t.s_next = SparseVec::from_dense(*encode_state(next, layout));
    t.mask_next = env.valid_actions(next);
  }
  agent.remember(std::move(t));
  if (++since >= agent.config().p) {
    since = 0;
    if (agent.ready()) agent.learn(agent.config().lr(s), rng_);
  }
}

void CoTrainer::train_solver_on(const Equation& eq) {
  EnvState st = solver_env_.reset(eq, rng_);
  while (st.terminal == Terminal::None) {
    auto enc = encode_state(st, solver_layout_);
    if (!enc) break;
    auto mask = solver_env_.valid_actions(st);
    double s = solver_window_.rate();
    int a = solver_.act(*enc, mask, solver_.config().eps(static_cast<double>(solver_.updates()), s), rng_);
    auto [next, out] = solver_env_.step(st, a, rng_);
    push(solver_, solver_since_, solver_layout_, *enc, a, out, solver_env_, next, s);
    st = std::move(next);
  }
}

GeneratedTask CoTrainer::episode() {
  GeneratedTask task;
  task.episode = episodes_;
  EnvState st = generator_reset(gen_env_, family_, rng_, &task.seed);
  SolverJudge judge = [this](const Equation& eq, Rng& rng) { return greedy_solver_fails(eq, rng); };
  while (st.terminal == Terminal::None) {
    auto enc = encode_state(st, gen_layout_);
    if (!enc) throw std::logic_error("non-terminal generator state failed to encode");
    auto mask = gen_env_.valid_actions(st);
    double s = generator_s();
    int a = generator_.act(*enc, mask, generator_.config().eps(static_cast<double>(generator_.updates()), s), rng_);
    GeneratorStep g = generator_step(gen_env_, st, a, judge, rng_);
    task.gen_reward += g.out.reward;
    if (g.submitted) {
      task.submitted = true;
      task.solver_failed = g.solver_failed;
      task.equation = g.next.eq;
      task.assumptions = g.next.assumptions;
    }
    push(generator_, gen_since_, gen_layout_, *enc, a, g.out, gen_env_, g.next, s);
    st = std::move(g.next);
  }
  task.gen_steps = st.steps;
  task.gen_terminal = st.terminal;
  valid_window_.push(task.submitted);
  if (task.submitted) {
    fool_window_.push(task.solver_failed);
    solver_window_.push(!task.solver_failed);
    if (opt_.check_submissions) task.consistent = submission_consistent(task.equation, task.seed, task.assumptions, rng_);
    if (!frozen_) train_solver_on(task.equation);
  }
  ++episodes_;
  return task;
}

CoTrainSummary CoTrainer::run(const std::vector<EvalSet>& evals, std::ostream* metrics, std::ostream* task_log) {
  CoTrainSummary sum;
  if (!opt_.out_dir.empty()) std::filesystem::create_directories(opt_.out_dir);
  auto ckpt = [&](const std::string& tag) {
    if (opt_.out_dir.empty()) return;
    std::filesystem::path dir(opt_.out_dir);
    solver_.online().save((dir / ("solver_" + tag + ".ckpt")).string(), solver_.updates());
    generator_.online().save((dir / ("generator_" + tag + ".ckpt")).string(), generator_.updates());
  };
  if (metrics) *metrics << metrics_header(evals) << " gen_epoch gen_valid gen_fool gen_eps gen_eta\n";
  if (task_log) *task_log << "# episode gen_steps terminal solver reward seed equation\n";
  while (episodes_ < opt_.episodes) {
    GeneratedTask t = episode();
    sum.submitted += t.submitted;
    sum.fooled += t.submitted && t.solver_failed;
    sum.inconsistent += t.submitted && !t.consistent;
    if (task_log) *task_log << task_log_line(t) << '\n';
    bool last = episodes_ >= opt_.episodes;
    if (opt_.checkpoint_every && episodes_ % opt_.checkpoint_every == 0) ckpt(std::to_string(episodes_));
    if ((opt_.eval_every && episodes_ % opt_.eval_every == 0) || last) {
      MetricsRow row;
      row.epoch = solver_.updates();
      row.episodes = episodes_;
      row.scores = score_sets(solver_env_, solver_.online(), evals, opt_.seed, opt_.workers);
      row.eps = solver_.config().eps(static_cast<double>(solver_.updates()), solver_s());
      row.eta = solver_.config().lr(solver_s());
      if (metrics) {
        double gs = generator_s();
        *metrics << metrics_line(row) << ' ' << generator_.updates() << ' ' << valid_rate() << ' ' << fool_rate()
                 << ' ' << generator_.config().eps(static_cast<double>(generator_.updates()), gs) << ' '
                 << generator_.config().lr(gs) << std::endl;
      }
    }
  }
  ckpt("final");
  sum.episodes = episodes_;
  return sum;
}

}  // namespace eqrl
