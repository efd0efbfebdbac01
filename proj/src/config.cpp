#include "eqrl/config.hpp"

#include "eqrl/encoder.hpp"
#include "eqrl/parser.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace eqrl {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument(key + ": expected true or false, got '" + v + "'");
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  double d = to_double(key, v);
  auto i = static_cast<long long>(d);
  if (static_cast<double>(i) != d) throw std::invalid_argument(key + ": expected an integer, got '" + v + "'");
  return i;
}

std::vector<int> to_ints(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& item : split_list(v)) out.push_back(static_cast<int>(to_int(key, item)));
  return out;
}

TestSetSpec to_test_set(const std::string& spec, const SamplerConfig& base) {
  // field:type[:p0]
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(trim(item));
  if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("test_sets: bad entry '" + spec + "'");
  TestSetSpec t;
  t.name = spec;
  t.sampler = base;
  t.sampler.field = parse_field(parts[0]);
  t.sampler.type = parse_eq_type(parts[1]);
  if (parts.size() == 3) t.sampler.p0 = to_double("test_sets", parts[2]);
  std::replace(t.name.begin(), t.name.end(), ':', '_');
  std::replace(t.name.begin(), t.name.end(), '+', 'p');
  return t;
}

bool set_agent_value(AgentSpec& a, const std::string& key, const std::string& v) {
  EnvConfig& e = a.env;
  DqnConfig& d = a.dqn;
  if (key == "S") e.S = static_cast<int>(to_int(key, v));
  else if (key == "T") e.T = static_cast<int>(to_int(key, v));
  else if (key == "O_eq") e.O_eq = static_cast<int>(to_int(key, v));
  else if (key == "O_st") e.O_st = static_cast<int>(to_int(key, v));
  else if (key == "constants") {
    e.constants.clear();
    for (const auto& c : split_list(v)) {
      Expr x = parse_expression(c);
      if (!x.is_number()) throw std::invalid_argument("constants: '" + c + "' is not a number");
      e.constants.push_back(x.value());
    }
  } else if (key == "symbolic") e.symbolic = to_bool(key, v);
  else if (key == "complex") e.complex = to_bool(key, v);
  else if (key == "imag_row") e.imag_row = to_bool(key, v);
  else if (key == "t_max") e.t_max = static_cast<int>(to_int(key, v));
  else if (key == "r_slv") e.r_slv = to_double(key, v);
  else if (key == "r_so") e.r_so = to_double(key, v);
  else if (key == "p_st") e.p_st = to_double(key, v);
  else if (key == "p_as") e.p_as = to_double(key, v);
  else if (key == "r_fool") e.r_fool = to_double(key, v);
  else if (key == "p_step") e.p_step = to_double(key, v);
  else if (key == "simplify_budget") e.simplify_budget = static_cast<std::size_t>(to_int(key, v));
  else if (key == "shuffle") e.shuffle = to_bool(key, v);
  else if (key == "cap") e.cap = static_cast<long>(to_int(key, v));
  else if (key == "scale") e.scale = to_double(key, v);
  else if (key == "A") a.A_listed = static_cast<int>(to_int(key, v));
  else if (key == "hidden") a.hidden = to_ints(key, v);
  else if (key == "H") {
    if (static_cast<long long>(a.hidden.size()) != to_int(key, v) && !a.hidden.empty()) {
      throw std::invalid_argument("H does not match the number of hidden widths");
    }
  } else if (key == "M") d.M = static_cast<std::size_t>(to_int(key, v));
  else if (key == "B") d.B = static_cast<std::size_t>(to_int(key, v));
  else if (key == "p") d.p = static_cast<int>(to_int(key, v));
  else if (key == "tau_hat") d.tau_hat = static_cast<int>(to_int(key, v));
  else if (key == "eps_hat") d.eps_hat = to_double(key, v);
  else if (key == "gamma") d.gamma = to_double(key, v);
  else if (key == "mu") d.mu = to_double(key, v);
  else if (key == "eps_schedule") {
    if (v == "exponential") d.eps.kind = EpsSchedule::Kind::Exponential;
    else if (v == "adaptive") d.eps.kind = EpsSchedule::Kind::Adaptive;
    else throw std::invalid_argument("eps_schedule: expected exponential or adaptive");
  } else if (key == "eps_i") d.eps.eps_i = to_double(key, v);
  else if (key == "eps_f") d.eps.eps_f = to_double(key, v);
  else if (key == "T_eps") d.eps.T_eps = to_double(key, v);
  else if (key == "alpha_eps") d.eps.alpha = to_double(key, v);
  else if (key == "eta_schedule") {
    if (v == "fixed") d.lr.kind = LrSchedule::Kind::Fixed;
    else if (v == "adaptive") d.lr.kind = LrSchedule::Kind::Adaptive;
    else throw std::invalid_argument("eta_schedule: expected fixed or adaptive");
  } else if (key == "eta") d.lr.eta = to_double(key, v);
  else if (key == "eta_i") d.lr.eta_i = to_double(key, v);
  else if (key == "eta_f") d.lr.eta_f = to_double(key, v);
  else if (key == "alpha_eta") d.lr.alpha = to_double(key, v);
  else return false;
  return true;
}

}  // namespace

std::vector<int> AgentSpec::layer_sizes(int input) const {
  std::vector<int> s{input};
  s.insert(s.end(), hidden.begin(), hidden.end());
  s.push_back(env.output_width());
  return s;
}

void set_preset_value(Preset& p, const std::string& key, const std::string& v) {
  if (key.rfind("gen.", 0) == 0) {
    if (!set_agent_value(p.generator, key.substr(4), v)) {
      if (key == "gen.seed_family") {
        if (v == "rational") p.seed_family = SeedFamily::Rational;
        else if (v == "symbolic_ratio") p.seed_family = SeedFamily::SymbolicRatio;
        else throw std::invalid_argument("gen.seed_family: expected rational or symbolic_ratio");
      } else if (key == "gen.expect_input") {
        p.gen_expect_input = static_cast<int>(to_int(key, v));
      } else if (key == "gen.expect_params") {
        p.gen_expect_params = to_int(key, v);
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    }
    return;
  }
  if (set_agent_value(p.solver, key, v)) return;
  if (key == "name") p.name = v;
  else if (key == "mode") {
    if (v == "fixed") p.adversarial = false;
    else if (v == "adversarial") p.adversarial = true;
    else throw std::invalid_argument("mode: expected fixed or adversarial");
  } else if (key == "field") p.sampler.field = parse_field(v);
  else if (key == "eq_type") p.sampler.type = parse_eq_type(v);
  else if (key == "p0") p.sampler.p0 = to_double(key, v);
  else if (key == "int_bound") p.sampler.int_bound = static_cast<long>(to_int(key, v));
  else if (key == "p_bound") p.sampler.p_bound = static_cast<long>(to_int(key, v));
  else if (key == "q_bound") p.sampler.q_bound = static_cast<long>(to_int(key, v));
  else if (key == "test_sets") {
    p.test_sets.clear();
    for (const auto& s : split_list(v)) p.test_sets.push_back(to_test_set(s, p.sampler));
  } else if (key == "test_size") p.test_size = static_cast<std::size_t>(to_int(key, v));
  else if (key == "epochs") p.epochs = static_cast<std::uint64_t>(to_int(key, v));
  else if (key == "episodes") p.episodes = static_cast<std::uint64_t>(to_int(key, v));
  else if (key == "eval_every") p.eval_every = static_cast<std::uint64_t>(to_int(key, v));
  else if (key == "checkpoint_every") p.checkpoint_every = static_cast<std::uint64_t>(to_int(key, v));
  else if (key == "target_success") p.target_success = to_double(key, v);
  else if (key == "seed") p.seed = static_cast<std::uint64_t>(to_int(key, v));
  else if (key == "expect_input") p.expect_input = static_cast<int>(to_int(key, v));
  else if (key == "expect_params") p.expect_params = to_int(key, v);
  else throw std::invalid_argument("unknown key '" + key + "'");
}

Preset parse_preset(const std::string& text, const std::string& origin) {
  Preset p;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::pair<std::string, std::string>> gen_lines;
  std::vector<std::string> errors;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(origin + ":" + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    // Generator keys are applied after the solver so they can override its copy.
    if (key.rfind("gen.", 0) == 0) {
      gen_lines.emplace_back(key, value);
      continue;
    }
    try {
      set_preset_value(p, key, value);
    } catch (const std::exception& e) {
      errors.push_back(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (p.adversarial) {
    int A = p.generator.A_listed;
    p.generator.env = p.solver.env;
    p.generator.dqn = p.solver.dqn;
    p.generator.hidden = p.solver.hidden;
    p.generator.A_listed = A;
    p.generator.env.generator = true;
  }
  for (const auto& [k, v] : gen_lines) {
    try {
      set_preset_value(p, k, v);
    } catch (const std::exception& e) {
      errors.push_back(origin + ": " + e.what());
    }
  }
  p.solver.env.A_listed = p.solver.A_listed;
  p.generator.env.A_listed = p.generator.A_listed;
  if (p.test_sets.empty()) p.test_sets.push_back({"train_dist", p.sampler});
  for (auto* a : {&p.solver, &p.generator}) {
    if (a == &p.generator && !p.adversarial) continue;
    try {
      a->env.validate();
    } catch (const std::exception& e) {
      errors.push_back(origin + ": " + e.what());
    }
  }
  if (!errors.empty()) {
    std::string msg;
    for (const auto& e : errors) msg += e + "\n";
    throw std::invalid_argument(msg);
  }
  return p;
}

Preset load_preset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read preset " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  Preset p = parse_preset(ss.str(), path);
  if (p.name.empty()) p.name = std::filesystem::path(path).stem().string();
  return p;
}

std::string default_preset_dir() {
  if (const char* env = std::getenv("EQRL_PRESETS")) return env;
#ifdef EQRL_PRESET_DIR
  return EQRL_PRESET_DIR;
#else
  return "presets";
#endif
}

std::vector<std::string> preset_names(const std::string& dir) {
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".cfg") names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

Preset resolve_preset(const std::string& name_or_path, const std::string& dir) {
  if (std::filesystem::exists(name_or_path) && std::filesystem::is_regular_file(name_or_path)) {
    return load_preset(name_or_path);
  }
  auto path = std::filesystem::path(dir) / (name_or_path + ".cfg");
  if (std::filesystem::exists(path)) return load_preset(path.string());
  std::string valid;
  for (const auto& n : preset_names(dir)) valid += (valid.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown preset '" + name_or_path + "'; valid names: " + valid);
}

DimensionReport dimensions(const AgentSpec& a) {
  DimensionReport r;
  r.input = EncoderLayout::from(a.env).input_size();
  r.actions = a.env.action_count();
  r.output = a.env.output_width();
  r.params = static_cast<long long>(parameter_count(a.layer_sizes(r.input)));
  if (a.A_listed != 0 && a.A_listed != r.actions) {
    r.warnings.push_back("listed output dim " + std::to_string(a.A_listed) + " differs from 2T+O_eq+C_num+O_st" +
                         (a.env.generator ? "+1" : "") + " = " + std::to_string(r.actions) + "; " +
                         std::to_string(a.A_listed - r.actions) + " output(s) built but always masked");
  }
  return r;
}

}  // namespace eqrl
