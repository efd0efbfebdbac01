#pragma once

#include "eqrl/dqn.hpp"
#include "eqrl/environment.hpp"
#include "eqrl/taskgen.hpp"

#include <map>
#include <string>
#include <vector>

namespace eqrl {

struct TestSetSpec {
  std::string name;
  SamplerConfig sampler;
};

enum class SeedFamily { Rational, SymbolicRatio };

struct AgentSpec {
  EnvConfig env;
  DqnConfig dqn;
  std::vector<int> hidden;
  int A_listed = 0;  // output dim printed by the source table, 0 if none

  std::vector<int> layer_sizes(int input) const;
};

struct Preset {
  std::string name;
  bool adversarial = false;
  AgentSpec solver;
  AgentSpec generator;  // adversarial presets only
  SeedFamily seed_family = SeedFamily::Rational;
  SamplerConfig sampler;  // fixed-distribution training tasks
  std::vector<TestSetSpec> test_sets;
  std::size_t test_size = 1000;
  std::uint64_t epochs = 1000000;
  std::uint64_t episodes = 100000;  // co-training budget
  std::uint64_t eval_every = 10000;
  std::uint64_t checkpoint_every = 10000;
  double target_success = 0.0;  // stop early once every test set reaches it
  std::uint64_t seed = 1;
  // Reference values the derived dimensions are checked against.
  int expect_input = 0;
  long long expect_params = 0;
  int gen_expect_input = 0;
  long long gen_expect_params = 0;
};

// Flat "key = value" text; '#' starts a comment. Keys prefixed with "gen."
// configure the generator agent.
Preset parse_preset(const std::string& text, const std::string& origin = "<string>");
Preset load_preset(const std::string& path);
// Applies one key/value pair; throws std::invalid_argument on unknown keys.
void set_preset_value(Preset& p, const std::string& key, const std::string& value);

std::vector<std::string> preset_names(const std::string& dir);
// Resolves a name in the preset directory or a path to a .cfg file.
Preset resolve_preset(const std::string& name_or_path, const std::string& dir);
std::string default_preset_dir();

struct DimensionReport {
  int input = 0;
  int actions = 0;  // formula
  int output = 0;   // network width
  long long params = 0;
  std::vector<std::string> warnings;
};
DimensionReport dimensions(const AgentSpec& a);

}  // namespace eqrl
