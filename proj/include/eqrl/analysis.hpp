#pragma once

#include "eqrl/environment.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace eqrl {

using Trace = std::vector<TraceRecord>;

// Equation shape over {N, x, c, +, *, ^, (, ), =}: numbers become N,
// commutative operands are ordered (N first, x-free before x-terms), and the
// side holding x is printed first; ties go to the smaller string.
std::string pattern_of(const Expr& e);
std::string superstate_of(const Equation& eq);
// Superstate of a trace record: its pattern, or one of the labels
// "timeout", "bad", "step_limit", "solved" (for eliminated unknowns).
std::string superstate_of(const TraceRecord& r);

struct TransitionGraph {
  std::map<std::string, double> nodes;  // share of elementary steps taken from the node
  std::map<std::pair<std::string, std::string>, double> edges;  // share among the source's out-steps
  std::size_t steps = 0;
};

TransitionGraph transition_graph(const std::vector<Trace>& traces);

// Nodes and edges below `min_share` are left out; nodes are kept when a
// surviving edge touches them.
std::string to_dot(const TransitionGraph& g, double min_share = 0.01);
std::string graph_csv(const TransitionGraph& g);

std::string render_trace(const Trace& trace);

// One JSON record per line; a record with step 0 starts a new trace.
std::vector<Trace> read_traces(std::istream& in);
void write_trace(std::ostream& out, const Trace& trace);

// Metrics log ("# name ..." header then space-separated rows) to CSV.
std::string metrics_to_csv(std::istream& in);

}  // namespace eqrl
