// eqrl: train, evaluate and inspect stack-calculator equation solvers.
#include "CLI11.hpp"

#include "eqrl/analysis.hpp"
#include "eqrl/parser.hpp"
#include "eqrl/runner.hpp"
#include "eqrl/units.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace eqrl;

namespace {

constexpr int kOk = 0;
constexpr int kTaskFailure = 1;
constexpr int kUsage = 2;

// Bad inputs (config, dataset, checkpoint shape) map to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PresetArgs {
  std::string preset;
  std::string config;
  std::vector<std::string> overrides;
  std::string preset_dir = default_preset_dir();

  void attach(CLI::App* cmd, bool required = true) {
    auto* grp = cmd->add_option_group("configuration");
    grp->add_option("--preset", preset, "Preset name or path to a .cfg file");
    grp->add_option("--config", config, "Config file (same format as presets)");
    if (required) grp->require_option(1);
    cmd->add_option("--set", overrides, "Override a key, e.g. --set eta=0.01")->expected(1, -1);
    cmd->add_option("--preset-dir", preset_dir, "Directory holding preset files")->capture_default_str();
  }

  Preset load() const {
    Preset p;
    try {
      p = config.empty() ? resolve_preset(preset, preset_dir) : load_preset(config);
      std::string extra;
      for (const auto& kv : overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        extra += kv.substr(0, eq) + " = " + kv.substr(eq + 1) + "\n";
      }
      if (!extra.empty()) p = reapply(p, extra);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return p;
  }

  // Overrides are re-parsed on top of the original text so that validation
  // and generator inheritance run once over the final values.
  Preset reapply(const Preset& base, const std::string& extra) const {
    std::string path = config.empty() ? "" : config;
    if (path.empty()) {
      if (std::filesystem::is_regular_file(preset)) path = preset;
      else path = (std::filesystem::path(preset_dir) / (preset + ".cfg")).string();
    }
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    Preset p = parse_preset(ss.str() + "\n" + extra, path);
    if (p.name.empty()) p.name = base.name;
    return p;
  }
};

std::string default_out_dir(const std::string& name) {
  const char* env = std::getenv("EQRL_OUT");
  std::filesystem::path root = env && *env ? env : "runs";
  return (root / name).string();
}

void print_dims(std::ostream& os, const std::string& who, const AgentSpec& a) {
  DimensionReport r = dimensions(a);
  os << who << ": input " << r.input << ", actions " << r.actions << ", output " << r.output << ", parameters "
     << r.params << '\n';
  for (const auto& w : r.warnings) std::cerr << "warning: " << who << ": " << w << '\n';
}

std::vector<int> preset_sizes(const Preset& p) {
  return p.solver.layer_sizes(EncoderLayout::from(p.solver.env).input_size());
}

std::string shape(const std::vector<int>& s) {
  std::string o = "[";
  for (std::size_t i = 0; i < s.size(); ++i) o += (i ? ", " : "") + std::to_string(s[i]);
  return o + "]";
}

// nullptr for the scripted oracle.
std::unique_ptr<Mlp> load_checkpoint(const std::string& path, const Preset& p) {
  if (path == "oracle") return nullptr;
  Mlp net;
  try {
    net = Mlp::load(path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  auto want = preset_sizes(p);
  if (net.sizes() != want) {
    throw UsageError("checkpoint " + path + " has layer sizes " + shape(net.sizes()) + " but preset " + p.name +
                     " needs " + shape(want));
  }
  return std::make_unique<Mlp>(std::move(net));
}

PolicyFactory factory_for(const Mlp* net, const EncoderLayout& layout) {
  if (!net) return [] { return std::unique_ptr<Policy>(std::make_unique<ScriptedPolicy>()); };
  return [net, layout] { return std::unique_ptr<Policy>(std::make_unique<NetPolicy>(*net, layout)); };
}

std::vector<Equation> read_dataset(const std::string& path) {
  if (!std::filesystem::exists(path)) throw UsageError("dataset " + path + " does not exist");
  try {
    return load_dataset(path);
  } catch (const DatasetError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deep Q-learning on a symbolic stack calculator for linear equations"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 1;

  // train
  auto* train = app.add_subcommand("train", "Train a solver (or a solver/generator pair)");
  PresetArgs train_args;
  train_args.attach(train);
  std::string train_out;
  std::uint64_t epochs = 0, episodes = 0;
  bool quiet = false;
  train->add_option("--out", train_out, "Output directory (default $EQRL_OUT/<preset> or runs/<preset>)");
  train->add_option("--epochs", epochs, "Parameter updates (fixed-distribution presets)");
  train->add_option("--episodes", episodes, "Co-training episodes (adversarial presets)");
  train->add_flag("--quiet", quiet, "Do not echo metrics");

  // eval
  auto* eval = app.add_subcommand("eval", "Greedy evaluation on a dataset");
  PresetArgs eval_args;
  eval_args.attach(eval);
  std::string eval_ckpt, eval_data, eval_csv;
  eval->add_option("--checkpoint", eval_ckpt, "Checkpoint file, or 'oracle' for the scripted policy")->required();
  eval->add_option("--dataset", eval_data, "Dataset file")->required();
  eval->add_option("--csv", eval_csv, "Per-equation outcomes");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one equation and print the trace");
  PresetArgs solve_args;
  solve_args.attach(solve);
  std::string solve_ckpt = "oracle", solve_eq, solve_data, solve_traces;
  solve->add_option("--checkpoint", solve_ckpt, "Checkpoint file, or 'oracle'")->capture_default_str();
  solve->add_option("equation", solve_eq, "Equation such as \"-1/5 + 3/4*x = 5/8 + 2*x\"");
  solve->add_option("--dataset", solve_data, "Solve every equation of a dataset instead");
  solve->add_option("--traces", solve_traces, "Append JSON trace records to this file");

  // gen-dataset
  auto* gen = app.add_subcommand("gen-dataset", "Sample a dataset of equations");
  std::string gen_field = "Z", gen_type = "numeric", gen_out;
  double gen_p0 = 0.5;
  std::size_t gen_n = 1000;
  long gen_bound = 10;
  gen->add_option("--field", gen_field, "Z, Q, Z+iZ or Q+iQ")->capture_default_str();
  gen->add_option("--type", gen_type, "numeric, symbolic, restricted or shift")->capture_default_str();
  gen->add_option("--p0", gen_p0, "Probability of a zero c coefficient")->capture_default_str();
  gen->add_option("--int-bound", gen_bound, "Integer coefficient bound")->capture_default_str();
  gen->add_option("--n", gen_n, "Number of equations")->capture_default_str();
  gen->add_option("--out", gen_out, "Output file (default: standard output)");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Superstate graph from traces, metrics to CSV");
  std::vector<std::string> an_traces;
  std::string an_dot, an_csv, an_metrics, an_metrics_csv;
  double an_min = 0.01;
  bool an_print = false;
  analyze->add_option("--traces", an_traces, "Trace files (JSON lines)")->expected(1, -1);
  analyze->add_option("--dot", an_dot, "Write the transition graph as DOT");
  analyze->add_option("--csv", an_csv, "Write graph weights as CSV");
  analyze->add_option("--min-share", an_min, "Hide DOT nodes/edges below this share")->capture_default_str();
  analyze->add_flag("--print", an_print, "Render the traces as text");
  analyze->add_option("--metrics", an_metrics, "Metrics log to convert");
  analyze->add_option("--metrics-csv", an_metrics_csv, "CSV output for --metrics (default: standard output)");

  // presets
  auto* presets = app.add_subcommand("presets", "List presets with derived dimensions");
  std::string presets_dir = default_preset_dir();
  presets->add_option("--preset-dir", presets_dir)->capture_default_str();

  for (auto* cmd : {train, eval, solve, gen}) {
    cmd->add_option("--seed", seed, "Random seed")->each([&](const std::string&) { seed_set = true; });
  }
  for (auto* cmd : {train, eval, solve}) {
    cmd->add_option("--workers", workers, "Evaluation threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*train) {
      Preset p = train_args.load();
      if (seed_set) p.seed = seed;
      if (epochs) p.epochs = epochs;
      if (episodes) p.episodes = episodes;
      std::string out = train_out.empty() ? default_out_dir(p.name) : train_out;
      print_dims(std::cerr, "solver", p.solver);
      if (p.adversarial) print_dims(std::cerr, "generator", p.generator);
      RunOptions run{out, workers, quiet ? nullptr : &std::cout};
      if (p.adversarial) {
        CoTrainSummary s = co_train_preset(p, run);
        std::cerr << "co-training done: " << s.episodes << " episodes, " << s.submitted << " submitted, " << s.fooled
                  << " fooled the solver, " << s.inconsistent << " failed the equivalence check; output in " << out
                  << '\n';
        return s.inconsistent ? kTaskFailure : kOk;
      }
      TrainSummary s = train_preset(p, run);
      std::cerr << "training done: " << s.epochs << " epochs, " << s.episodes << " episodes"
                << (s.reached_target ? ", target reached" : "") << "; output in " << out << '\n';
      return kOk;
    }

    if (*eval) {
      Preset p = eval_args.load();
      auto net = load_checkpoint(eval_ckpt, p);
      auto data = read_dataset(eval_data);
      if (data.empty()) throw UsageError("dataset " + eval_data + " is empty");
      Environment env(p.solver.env);
      EvalResult r = evaluate(env, factory_for(net.get(), EncoderLayout::from(p.solver.env)), data,
                              seed_set ? seed : p.seed, workers);
      std::cout << "equations " << data.size() << "\nsuccess_rate " << r.success_rate << "\navg_steps ";
      if (r.avg_reported) std::cout << r.avg_steps << '\n';
      else std::cout << "n/a (success below 2%)\n";
      if (!eval_csv.empty()) {
        std::ofstream csv(eval_csv);
        if (!csv) throw std::runtime_error("cannot write " + eval_csv);
        csv << "index,equation,terminal,steps,reward,final\n";
        for (std::size_t i = 0; i < data.size(); ++i) {
          const auto& o = r.outcomes[i];
          csv << i << ",\"" << render_equation(data[i]) << "\"," << terminal_name(o.terminal) << ',' << o.steps << ','
              << o.total_reward << ",\"" << render_equation(o.final_eq) << "\"\n";
        }
      }
      return kOk;
    }

    if (*solve) {
      Preset p = solve_args.load();
      auto net = load_checkpoint(solve_ckpt, p);
      std::vector<Equation> eqs;
      if (!solve_data.empty()) {
        eqs = read_dataset(solve_data);
      } else if (!solve_eq.empty()) {
        try {
          eqs.push_back(parse_equation(solve_eq));
        } catch (const std::exception& e) {
          throw UsageError(std::string("cannot parse equation: ") + e.what());
        }
      } else {
        throw UsageError("solve needs an equation or --dataset");
      }
      Environment env(p.solver.env);
      auto policy = factory_for(net.get(), EncoderLayout::from(p.solver.env))();
      std::ofstream traces;
      if (!solve_traces.empty()) {
        traces.open(solve_traces, std::ios::app);
        if (!traces) throw std::runtime_error("cannot write " + solve_traces);
      }
      bool all = true;
      for (std::size_t i = 0; i < eqs.size(); ++i) {
        Rng rng = episode_rng(seed_set ? seed : p.seed, i);
        EpisodeResult r;
        try {
          r = run_episode(env, *policy, eqs[i], rng, true);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        if (traces.is_open()) write_trace(traces, r.trace);
        if (solve_data.empty()) std::cout << render_trace(r.trace);
        all = all && r.success();
      }
      if (!solve_data.empty()) std::cout << "solved all: " << (all ? "yes" : "no") << '\n';
      return all ? kOk : kTaskFailure;
    }

    if (*gen) {
      SamplerConfig s;
      try {
        s.field = parse_field(gen_field);
        s.type = parse_eq_type(gen_type);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (gen_p0 < 0 || gen_p0 > 1) throw UsageError("--p0 must lie in [0, 1]");
      if (gen_bound < 1) throw UsageError("--int-bound must be positive");
      s.p0 = gen_p0;
      s.int_bound = gen_bound;
      Rng rng(seed_set ? seed : 1);
      std::vector<Equation> eqs;
      for (std::size_t i = 0; i < gen_n; ++i) eqs.push_back(sample_equation(s, rng));
      std::string comment = "field " + field_name(s.field) + ", type " + eq_type_name(s.type) + ", p0 " +
                            std::to_string(s.p0) + ", seed " + std::to_string(seed_set ? seed : 1);
      if (gen_out.empty()) {
        std::cout << "# " << comment << '\n';
        for (const auto& e : eqs) std::cout << render_equation(e) << '\n';
      } else {
        save_dataset(eqs, gen_out, comment);
      }
      return kOk;
    }

    if (*analyze) {
      if (an_traces.empty() && an_metrics.empty()) throw UsageError("analyze needs --traces or --metrics");
      if (!an_traces.empty()) {
        std::vector<Trace> traces;
        for (const auto& path : an_traces) {
          std::ifstream in(path);
          if (!in) throw UsageError("cannot read " + path);
          auto t = read_traces(in);
          traces.insert(traces.end(), t.begin(), t.end());
        }
        if (traces.empty()) throw UsageError("no trace records found");
        if (an_print) {
          for (const auto& t : traces) std::cout << render_trace(t) << '\n';
        }
        TransitionGraph g = transition_graph(traces);
        std::cout << "traces " << traces.size() << ", steps " << g.steps << ", superstates " << g.nodes.size() << '\n';
        if (!an_dot.empty()) std::ofstream(an_dot) << to_dot(g, an_min);
        if (!an_csv.empty()) std::ofstream(an_csv) << graph_csv(g);
        if (an_dot.empty() && an_csv.empty() && !an_print) std::cout << to_dot(g, an_min);
      }
      if (!an_metrics.empty()) {
        std::ifstream in(an_metrics);
        if (!in) throw UsageError("cannot read " + an_metrics);
        std::string csv = metrics_to_csv(in);
        if (an_metrics_csv.empty()) std::cout << csv;
        else std::ofstream(an_metrics_csv) << csv;
      }
      return kOk;
    }

    if (*presets) {
      auto names = preset_names(presets_dir);
      if (names.empty()) throw UsageError("no presets in " + presets_dir);
      for (const auto& n : names) {
        Preset p = load_preset((std::filesystem::path(presets_dir) / (n + ".cfg")).string());
        std::cout << n << (p.adversarial ? " (adversarial)" : "") << '\n';
        print_dims(std::cout, "  solver", p.solver);
        if (p.adversarial) print_dims(std::cout, "  generator", p.generator);
      }
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kTaskFailure;
  }
  return kUsage;
}
