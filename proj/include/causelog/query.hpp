#pragma once

#include <utility>
#include <vector>

#include "causelog/graph.hpp"

namespace causelog {

struct QuerySpec {
  double timestamp = 0.0;          // T
  std::vector<double> candidates;  // delay tolerances, ascending, >= 0
  double avg_len = 1.0;            // expected records per event trace, > 0
};

// Sub-graph of edges with T - t <= time <= T + t (inclusive) and their
// endpoint nodes; attributes copied unchanged.
CausalGraph temp_graph(const CausalGraph& g, double timestamp, double tolerance);

// min(1, |E_w| / avg_len): did the window capture a full event trace?
double inte_score(const CausalGraph& window, double avg_len);

// Edge share of the dominant weakly-connected component: the component with
// the most IOC-tagged edges (ties: more edges, then smallest node id), or the
// largest component when nothing is tagged. Empty window scores 1.
double inde_score(const CausalGraph& window);

struct DelayResult {
  double optimal_delay = 0.0;                    // t-hat
  CausalGraph window;                            // graph at T ± t-hat
  std::vector<std::pair<double, double>> scores; // (candidate, score), input order
};

// Scores every candidate with inte_score + inde_score over its window and
// picks the smallest candidate achieving the maximum.
// Throws EmptyCandidatesError; candidate invariants are checked.
DelayResult optimize_delay(const CausalGraph& g, const QuerySpec& spec);

}  // namespace causelog
