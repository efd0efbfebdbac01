#pragma once

#include "eqrl/adversary.hpp"
#include "eqrl/config.hpp"
#include "eqrl/trainer.hpp"

#include <iosfwd>
#include <string>

namespace eqrl {

// Test sets drawn from the preset's specs on streams independent of training.
std::vector<EvalSet> build_test_sets(const Preset& p, std::uint64_t seed);
TaskSource preset_tasks(const Preset& p);

struct RunOptions {
  std::string out_dir;
  int workers = 1;
  std::ostream* log = nullptr;  // progress lines
};

TrainOptions train_options(const Preset& p, const RunOptions& run);
CoTrainOptions co_train_options(const Preset& p, const RunOptions& run);

// Runs a fixed-distribution preset; writes metrics.txt and checkpoints.
TrainSummary train_preset(const Preset& p, const RunOptions& run);
// Runs an adversarial preset; writes metrics.txt, tasks.txt and both
// checkpoint streams.
CoTrainSummary co_train_preset(const Preset& p, const RunOptions& run);

}  // namespace eqrl
