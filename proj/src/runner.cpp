#include "eqrl/runner.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

namespace eqrl {

std::vector<EvalSet> build_test_sets(const Preset& p, std::uint64_t seed) {
  std::vector<EvalSet> out;
  for (std::size_t k = 0; k < p.test_sets.size(); ++k) {
    Rng rng = episode_rng(seed ^ 0x7e57da7aULL, k);
    EvalSet set{p.test_sets[k].name, {}};
    for (std::size_t i = 0; i < p.test_size; ++i) set.eqs.push_back(sample_equation(p.test_sets[k].sampler, rng));
    out.push_back(std::move(set));
  }
  return out;
}

TaskSource preset_tasks(const Preset& p) {
  SamplerConfig s = p.sampler;
  return [s](Rng& rng) { return sample_equation(s, rng); };
}

TrainOptions train_options(const Preset& p, const RunOptions& run) {
  TrainOptions o;
  o.epochs = p.epochs;
  o.eval_every = p.eval_every;
  o.checkpoint_every = p.checkpoint_every;
  o.target_success = p.target_success;
  o.seed = p.seed;
  o.workers = run.workers;
  o.out_dir = run.out_dir;
  return o;
}

CoTrainOptions co_train_options(const Preset& p, const RunOptions& run) {
  CoTrainOptions o;
  o.episodes = p.episodes;
  o.eval_every = p.eval_every;
  o.checkpoint_every = p.checkpoint_every;
  o.seed = p.seed;
  o.workers = run.workers;
  o.out_dir = run.out_dir;
  return o;
}

namespace {

// Copies everything written to each non-null sink.
class Tee : public std::streambuf {
 public:
  explicit Tee(std::vector<std::streambuf*> sinks) {
    for (auto* b : sinks) {
      if (b) sinks_.push_back(b);
    }
  }
  bool empty() const { return sinks_.empty(); }

 protected:
  int overflow(int c) override {
    if (c == EOF) return 0;
    for (auto* b : sinks_) {
      if (b->sputc(static_cast<char>(c)) == EOF) return EOF;
    }
    return c;
  }
  int sync() override {
    int r = 0;
    for (auto* b : sinks_) r |= b->pubsync();
    return r;
  }

 private:
  std::vector<std::streambuf*> sinks_;
};

std::ofstream open_out(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream f(std::filesystem::path(dir) / name);
  if (!f) throw std::runtime_error("cannot write " + (std::filesystem::path(dir) / name).string());
  return f;
}

}  // namespace

TrainSummary train_preset(const Preset& p, const RunOptions& run) {
  if (p.adversarial) throw std::invalid_argument("preset " + p.name + " is adversarial; use co-training");
  auto sets = build_test_sets(p, p.seed);
  Trainer trainer(p.solver.env, p.solver.dqn, p.solver.hidden, preset_tasks(p), train_options(p, run));
  std::ofstream metrics;
  if (!run.out_dir.empty()) metrics = open_out(run.out_dir, "metrics.txt");
  Tee tee({metrics.is_open() ? metrics.rdbuf() : nullptr, run.log ? run.log->rdbuf() : nullptr});
  std::ostream out(&tee);
  return trainer.run(sets, tee.empty() ? nullptr : &out);
}

CoTrainSummary co_train_preset(const Preset& p, const RunOptions& run) {
  if (!p.adversarial) throw std::invalid_argument("preset " + p.name + " is not adversarial");
  auto sets = build_test_sets(p, p.seed);
  CoTrainer co(p.solver, p.generator, p.seed_family, co_train_options(p, run));
  std::ofstream metrics, tasks;
  if (!run.out_dir.empty()) {
    metrics = open_out(run.out_dir, "metrics.txt");
    tasks = open_out(run.out_dir, "tasks.txt");
  }
  Tee tee({metrics.is_open() ? metrics.rdbuf() : nullptr, run.log ? run.log->rdbuf() : nullptr});
  std::ostream out(&tee);
  return co.run(sets, tee.empty() ? nullptr : &out, tasks.is_open() ? &tasks : nullptr);
}

}  // namespace eqrl
