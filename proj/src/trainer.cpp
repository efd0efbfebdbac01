#include "eqrl/trainer.hpp"

#include <cassert>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>

namespace eqrl {

void SuccessWindow::push(bool success) {
  hist_.push_back(success);
  hits_ += success;
  if (hist_.size() > length_) {
    hits_ -= hist_.front();
    hist_.pop_front();
  }
}

double SuccessWindow::rate() const {
  if (hist_.size() < length_) return 0.0;
  return static_cast<double>(hits_) / static_cast<double>(length_);
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string metrics_header(const std::vector<EvalSet>& sets) {
  std::string h = "# epoch episodes";
  for (const auto& s : sets) h += " success_" + s.name + " avg_steps_" + s.name;
  return h + " loss eps eta";
}

std::string metrics_line(const MetricsRow& row) {
  std::ostringstream os;
  os << row.epoch << ' ' << row.episodes;
  for (const auto& s : row.scores) {
    os << ' ' << fmt(s.success) << ' ' << (s.avg_reported ? fmt(s.avg_steps) : std::string("nan"));
  }
  os << ' ' << fmt(row.loss) << ' ' << fmt(row.eps) << ' ' << fmt(row.eta);
  return os.str();
}

std::vector<SetScore> score_sets(const Environment& env, const Mlp& net, const std::vector<EvalSet>& sets,
                                 std::uint64_t seed, int workers) {
  EncoderLayout layout = EncoderLayout::from(env.config());
  std::vector<SetScore> out;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    auto factory = [&]() -> std::unique_ptr<Policy> { return std::make_unique<NetPolicy>(net, layout); };
    EvalResult r = evaluate(env, factory, sets[k].eqs, seed + 7919 * k, workers);
    out.push_back({r.success_rate, r.avg_steps, r.avg_reported});
  }
  return out;
}

Trainer::Trainer(const EnvConfig& env, const DqnConfig& dqn, const std::vector<int>& hidden, TaskSource tasks,
                 TrainOptions opt)
    : env_(env),
      layout_(EncoderLayout::from(env)),
      agent_(
          [&] {
            std::vector<int> s{EncoderLayout::from(env).input_size()};
            s.insert(s.end(), hidden.begin(), hidden.end());
            s.push_back(env.output_width());
            return s;
          }(),
          dqn, opt.seed),
      tasks_(std::move(tasks)),
      opt_(std::move(opt)),
      rng_(opt_.seed ^ 0x5eedf00dULL),
      window_(opt_.window) {
  env.validate();
}

double Trainer::epsilon() const {
  return agent_.config().eps(static_cast<double>(agent_.updates()), window_.rate());
}

double Trainer::eta() const { return agent_.config().lr(window_.rate()); }

void Trainer::explore_step() {
  if (!live_) {
    // Tasks that are terminal on arrival (already solved, unrepresentable)
    // carry no decision and are skipped.
    for (int tries = 0;; ++tries) {
      if (tries == 100000) throw std::runtime_error("task source produced no playable equation");
      st_ = env_.reset(tasks_(rng_), rng_);
      if (st_.terminal != Terminal::None) continue;
      auto x = encode_state(st_, layout_);
      if (!x) continue;
      x_ = std::move(*x);
      break;
    }
    live_ = true;
  }
  auto mask = env_.valid_actions(st_);
  int a = agent_.act(x_, mask, epsilon(), rng_);
  assert(mask[a]);
  auto [next, out] = env_.step(st_, a, rng_);
  Transition t;
  t.s = SparseVec::from_dense(x_);
  t.a = a;
  t.r = out.reward;
  t.terminal = out.terminal;
  std::vector<double> xn;
  if (!out.terminal) {
    auto enc = encode_state(next, layout_);
    if (!enc) throw std::logic_error("non-terminal state failed to encode");
    xn = std::move(*enc);
    t.s_next = SparseVec::from_dense(xn);
    t.mask_next = env_.valid_actions(next);
  }
  agent_.remember(std::move(t));
  if (out.terminal) {
    window_.push(next.terminal == Terminal::Solved || next.terminal == Terminal::Eliminated);
    ++episodes_;
    live_ = false;
  } else {
    st_ = std::move(next);
    x_ = std::move(xn);
  }
}

bool Trainer::epoch(double& loss) {
  for (int k = 0; k < agent_.config().p; ++k) explore_step();
  if (!agent_.ready()) return false;
  try {
    loss = agent_.learn(eta(), rng_);
  } catch (const NonFiniteError& e) {
    throw NonFiniteError(std::string(e.what()) + " at epoch " + std::to_string(agent_.updates()) +
                         " (eta " + fmt(eta()) + ", episodes " + std::to_string(episodes_) + ")");
  }
  return true;
}

TrainSummary Trainer::run(const std::vector<EvalSet>& evals, std::ostream* metrics) {
  TrainSummary sum;
  if (!opt_.out_dir.empty()) std::filesystem::create_directories(opt_.out_dir);
  auto ckpt = [&](const std::string& tag) {
    if (opt_.out_dir.empty()) return;
    auto path = std::filesystem::path(opt_.out_dir) / (opt_.ckpt_prefix + "_" + tag + ".ckpt");
    agent_.online().save(path.string(), agent_.updates());
  };
  if (metrics) *metrics << metrics_header(evals) << '\n';
  double loss_acc = 0.0;
  std::uint64_t loss_n = 0;
  while (agent_.updates() < opt_.epochs) {
    double loss = 0.0;
    if (!epoch(loss)) continue;
    loss_acc += loss;
    ++loss_n;
    std::uint64_t tau = agent_.updates();
    bool last = tau >= opt_.epochs;
    if (opt_.checkpoint_every && tau % opt_.checkpoint_every == 0) ckpt(std::to_string(tau));
    if ((opt_.eval_every && tau % opt_.eval_every == 0) || last) {
      MetricsRow row;
      row.epoch = tau;
      row.episodes = episodes_;
      row.scores = score_sets(env_, agent_.online(), evals, opt_.seed, opt_.workers);
      row.loss = loss_n ? loss_acc / static_cast<double>(loss_n) : 0.0;
      row.eps = epsilon();
      row.eta = eta();
      loss_acc = 0.0;
      loss_n = 0;
      if (metrics) *metrics << metrics_line(row) << std::endl;
      sum.rows.push_back(row);
      if (opt_.target_success > 0 && !row.scores.empty()) {
        bool all = true;
        for (const auto& s : row.scores) all = all && s.success >= opt_.target_success;
        if (all) {
          sum.reached_target = true;
          break;
        }
      }
    }
  }
  ckpt("final");
  sum.epochs = agent_.updates();
  sum.episodes = episodes_;
  return sum;
}

}  // namespace eqrl
