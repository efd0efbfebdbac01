#include "doctest.h"

#include "eqrl/parser.hpp"
#include "eqrl/runner.hpp"
#include "eqrl/taskgen.hpp"

#include <sstream>

using namespace eqrl;

namespace {

EnvConfig small_env() {
  EnvConfig c;
  c.t_max = 20;
  return c;
}

DqnConfig small_dqn() {
  DqnConfig d;
  d.M = 2000;
  d.B = 16;
  d.eps.T_eps = 500;
  d.lr.eta = 0.01;
  return d;
}

PolicyFactory oracle_factory() {
  return [] { return std::unique_ptr<Policy>(std::make_unique<ScriptedPolicy>()); };
}

}  // namespace

TEST_CASE("evaluation: already solved equations") {
  Environment env(small_env());
  std::vector<Equation> eqs{parse_equation("x = 1"), parse_equation("3/4 = x"), parse_equation("x = -2")};
  auto r = evaluate(env, oracle_factory(), eqs, 1);
  CHECK(r.success_rate == 1.0);
  CHECK(r.avg_steps == 0.0);
  CHECK(r.avg_reported);
}

TEST_CASE("evaluation: scripted oracle on x + a = b takes four steps") {
  Environment env(small_env());
  std::vector<Equation> eqs;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      if (a != 0) eqs.push_back(parse_equation("x + " + std::to_string(a) + " = " + std::to_string(b)));
  auto r = evaluate(env, oracle_factory(), eqs, 2, 3);
  CHECK(r.success_rate == 1.0);
  CHECK(r.avg_steps == 4.0);
  auto single = evaluate(env, oracle_factory(), eqs, 2, 1);
  for (std::size_t i = 0; i < eqs.size(); ++i) CHECK(single.outcomes[i].steps == r.outcomes[i].steps);
}

TEST_CASE("evaluation: random network runs to completion") {
  Environment env(small_env());
  Mlp net({EncoderLayout::from(env.config()).input_size(), 16, env.config().output_width()}, 3);
  SamplerConfig s;
  Rng rng(4);
  EvalSet set{"rand", {}};
  for (int i = 0; i < 100; ++i) set.eqs.push_back(sample_equation(s, rng));
  auto scores = score_sets(env, net, {set}, 5, 2);
  REQUIRE(scores.size() == 1);
  CHECK(scores[0].success >= 0.0);
  CHECK(scores[0].success <= 1.0);
  CHECK(scores[0].avg_reported == (scores[0].success >= 0.02));
}

TEST_CASE("trainer: metrics rows, counters and determinism") {
  SamplerConfig s;
  s.type = EqType::Shift;
  s.int_bound = 3;
  auto tasks = [s](Rng& rng) { return sample_equation(s, rng); };
  EvalSet set{"shift", {}};
  Rng rng(1);
  for (int i = 0; i < 20; ++i) set.eqs.push_back(sample_equation(s, rng));
  TrainOptions o;
  o.epochs = 600;
  o.eval_every = 200;
  o.checkpoint_every = 0;
  o.seed = 9;
  auto once = [&](std::string& log, Mlp& out) {
    Trainer t(small_env(), small_dqn(), {24}, tasks, o);
    std::ostringstream ss;
    auto sum = t.run({set}, &ss);
    log = ss.str();
    out = t.agent().online();
    CHECK(sum.epochs == 600);
    CHECK(sum.rows.size() == 3);
    CHECK(sum.episodes > 0);
    CHECK(t.agent().replay().size() <= 2000);
    return sum;
  };
  std::string l1, l2;
  Mlp n1, n2;
  auto s1 = once(l1, n1);
  once(l2, n2);
  CHECK(l1 == l2);
  CHECK(n1.bitwise_equal(n2));
  CHECK(l1.rfind("# epoch episodes success_shift avg_steps_shift loss eps eta\n", 0) == 0);
  CHECK(s1.rows[0].eps > s1.rows[2].eps);
}

TEST_CASE("trainer: early stop on target success") {
  SamplerConfig s;
  s.type = EqType::Shift;
  s.int_bound = 0;  // x = 0 type tasks only
  auto tasks = [](Rng&) { return parse_equation("x + 1 = 2"); };
  EvalSet solved{"solved", {parse_equation("x = 4")}};
  TrainOptions o;
  o.epochs = 10000;
  o.eval_every = 50;
  o.target_success = 0.9;
  Trainer t(small_env(), small_dqn(), {8}, tasks, o);
  auto sum = t.run({solved}, nullptr);
  CHECK(sum.reached_target);
  CHECK(sum.epochs == 50);
}

TEST_CASE("trainer rejects tasks that never need a decision") {
  TrainOptions o;
  o.epochs = 10;
  Trainer t(small_env(), small_dqn(), {8}, [](Rng&) { return parse_equation("x = 1"); }, o);
  CHECK_THROWS_AS(t.explore_step(), std::runtime_error);
}
