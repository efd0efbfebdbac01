#include "eqrl/analysis.hpp"

#include "eqrl/parser.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace eqrl {

namespace {

std::string percent(double share) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * share);
  return buf;
}

bool needs_parens_as_factor(const Expr& e) { return e.kind() == Kind::Add; }

bool needs_parens_as_base(const Expr& e) {
  return e.kind() == Kind::Add || e.kind() == Kind::Mul || e.kind() == Kind::Pow;
}

std::string dot_escape(const std::string& s) {
  std::string o;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') o += '\\';
    o += ch;
  }
  return o;
}

}  // namespace

std::string pattern_of(const Expr& e) {
  switch (e.kind()) {
    case Kind::Number:
      return "N";
    case Kind::Unknown:
    case Kind::SymConst:
      return e.name();
    case Kind::Add:
    case Kind::Mul: {
      bool add = e.kind() == Kind::Add;
      std::vector<std::pair<int, std::string>> parts;
      for (const auto& ch : e.children()) {
        std::string p = pattern_of(ch);
        if (!add && needs_parens_as_factor(ch)) p = "(" + p + ")";
        int rank = ch.is_number() ? 0 : (ch.contains_symbol("x") ? 2 : 1);
        parts.emplace_back(rank, std::move(p));
      }
      std::sort(parts.begin(), parts.end());
      std::string out;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += add ? '+' : '*';
        out += parts[i].second;
      }
      return out;
    }
    case Kind::Pow: {
      std::string b = pattern_of(e.base());
      std::string x = pattern_of(e.exponent());
      if (needs_parens_as_base(e.base())) b = "(" + b + ")";
      if (needs_parens_as_base(e.exponent())) x = "(" + x + ")";
      return b + "^" + x;
    }
  }
  return "?";
}

std::string superstate_of(const Equation& eq) {
  std::string l = pattern_of(eq.lhs);
  std::string r = pattern_of(eq.rhs);
  bool lx = eq.lhs.contains_symbol("x");
  bool rx = eq.rhs.contains_symbol("x");
  bool swap = lx != rx ? rx : r < l;
  return swap ? r + "=" + l : l + "=" + r;
}

std::string superstate_of(const TraceRecord& r) {
  if (r.terminal == "timeout" || r.terminal == "bad" || r.terminal == "step_limit") return r.terminal;
  if (r.terminal == "eliminated") return "solved";
  return superstate_of(Equation{parse_expression(r.lhs), parse_expression(r.rhs)});
}

TransitionGraph transition_graph(const std::vector<Trace>& traces) {
  TransitionGraph g;
  std::map<std::string, std::size_t> out_count;
  std::map<std::pair<std::string, std::string>, std::size_t> edge_count;
  for (const auto& t : traces) {
    if (t.empty()) continue;
    std::string prev = superstate_of(t[0]);
    g.nodes.emplace(prev, 0.0);
    for (std::size_t i = 1; i < t.size(); ++i) {
      std::string cur = superstate_of(t[i]);
      g.nodes.emplace(cur, 0.0);
      ++out_count[prev];
      ++edge_count[{prev, cur}];
      ++g.steps;
      prev = std::move(cur);
    }
  }
  for (auto& [name, w] : g.nodes) {
    auto it = out_count.find(name);
    w = it == out_count.end() || g.steps == 0 ? 0.0 : static_cast<double>(it->second) / static_cast<double>(g.steps);
  }
  for (const auto& [e, n] : edge_count) {
    g.edges[e] = static_cast<double>(n) / static_cast<double>(out_count[e.first]);
  }
  return g;
}

std::string to_dot(const TransitionGraph& g, double min_share) {
  std::map<std::string, bool> keep;
  for (const auto& [name, w] : g.nodes) keep[name] = w >= min_share;
  for (const auto& [e, w] : g.edges) {
    if (w >= min_share) keep[e.first] = keep[e.second] = true;
  }
  std::ostringstream os;
  os << "digraph superstates {\n  node [shape=box];\n";
  for (const auto& [name, w] : g.nodes) {
    if (!keep[name]) continue;
    os << "  \"" << dot_escape(name) << "\" [label=\"" << dot_escape(name) << "\\n" << percent(w) << "\"];\n";
  }
  for (const auto& [e, w] : g.edges) {
    if (w < min_share) continue;
    os << "  \"" << dot_escape(e.first) << "\" -> \"" << dot_escape(e.second) << "\" [label=\"" << percent(w)
       << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string graph_csv(const TransitionGraph& g) {
  auto quote = [](const std::string& s) { return "\"" + s + "\""; };
  std::ostringstream os;
  os << std::setprecision(10) << "kind,source,target,weight\n";
  for (const auto& [name, w] : g.nodes) os << "node," << quote(name) << ",," << w << '\n';
  for (const auto& [e, w] : g.edges) os << "edge," << quote(e.first) << ',' << quote(e.second) << ',' << w << '\n';
  return os.str();
}

std::string render_trace(const Trace& trace) {
  std::ostringstream os;
  os << "step  action        equation  |  stack  |  assumptions  |  reward\n";
  double total = 0.0;
  for (const auto& r : trace) {
    total += r.reward;
    std::string stack = "[";
    for (std::size_t i = 0; i < r.stack.size(); ++i) stack += (i ? ", " : "") + r.stack[i];
    stack += "]";
    std::string assumptions;
    for (std::size_t i = 0; i < r.assumptions.size(); ++i) assumptions += (i ? ", " : "") + r.assumptions[i];
    if (assumptions.empty()) assumptions = "-";
    char rew[32];
    std::snprintf(rew, sizeof rew, "%+.3f", total);
    os << std::left << std::setw(4) << r.step << "  " << std::setw(12) << r.action << "  " << r.lhs << " = " << r.rhs
       << "  |  " << stack << "  |  " << assumptions << "  |  " << rew << '\n';
  }
  if (!trace.empty() && trace.back().terminal != "none") os << "terminal: " << trace.back().terminal << '\n';
  return os.str();
}

std::vector<Trace> read_traces(std::istream& in) {
  std::vector<Trace> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    TraceRecord r;
    try {
      r = record_from_json(line);
    } catch (const std::exception& e) {
      throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
    }
    if (r.step == 0 || out.empty()) out.emplace_back();
    out.back().push_back(std::move(r));
  }
  return out;
}

void write_trace(std::ostream& out, const Trace& trace) {
  for (const auto& r : trace) out << to_json_line(r) << '\n';
}

std::string metrics_to_csv(std::istream& in) {
  std::ostringstream os;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> cols;
    while (ls >> tok) cols.push_back(tok);
    if (cols.empty()) continue;
    if (cols[0] == "#") {
      if (header) continue;
      cols.erase(cols.begin());
      header = true;
    } else if (cols[0][0] == '#') {
      continue;
    }
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
  }
  return os.str();
}

}  // namespace eqrl
