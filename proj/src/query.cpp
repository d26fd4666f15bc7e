#include "causelog/query.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "causelog/errors.hpp"

namespace causelog {

namespace {

class UnionFind {
 public:
  void add(const std::string& id) { parent_.try_emplace(id, id); }

  std::string find(const std::string& id) {
    std::string node = id;
    while (true) {
      const std::string& p = parent_.at(node);
      if (p == node) break;
      node = p;
    }
    // path compression
    std::string walk = id;
    while (walk != node) {
      std::string next = parent_.at(walk);
      parent_[walk] = node;
      walk = std::move(next);
    }
    return node;
  }

  void unite(const std::string& a, const std::string& b) {
    std::string ra = find(a);
    std::string rb = find(b);
    if (ra != rb) parent_[ra] = rb;
  }

 private:
  std::unordered_map<std::string, std::string> parent_;
};

bool edge_in_window(const GraphEdge& e, double timestamp, double tolerance) {
  return e.time >= timestamp - tolerance && e.time <= timestamp + tolerance;
}

}  // namespace

CausalGraph temp_graph(const CausalGraph& g, double timestamp, double tolerance) {
  if (tolerance < 0.0) throw std::invalid_argument("delay tolerance must be >= 0");
  CausalGraph window;
  window.name = "window";
  for (const GraphEdge& e : g.edges()) {
    if (!edge_in_window(e, timestamp, tolerance)) continue;
    if (const auto* attrs = g.find_node(e.src)) window.set_node(e.src, *attrs);
    if (const auto* attrs = g.find_node(e.dst)) window.set_node(e.dst, *attrs);
    window.upsert_edge(e);
  }
  return window;
}

double inte_score(const CausalGraph& window, double avg_len) {
  if (avg_len <= 0.0) throw std::invalid_argument("average length must be > 0");
  return std::min(1.0, static_cast<double>(window.edge_count()) / avg_len);
}

double inde_score(const CausalGraph& window) {
  if (window.edge_count() == 0) return 1.0;

  UnionFind uf;
  for (const auto& [id, attrs] : window.nodes()) uf.add(id);
  for (const GraphEdge& e : window.edges()) uf.unite(e.src, e.dst);

  struct Component {
    std::size_t edges = 0;
    std::size_t ioc_edges = 0;
    std::string min_node;
  };
  std::unordered_map<std::string, Component> components;
  for (const auto& [id, attrs] : window.nodes()) {
    Component& c = components[uf.find(id)];
    if (c.min_node.empty() || id < c.min_node) c.min_node = id;
  }
  for (const GraphEdge& e : window.edges()) {
    Component& c = components[uf.find(e.src)];
    ++c.edges;
    auto it = e.attrs.find("ioc");
    if (it != e.attrs.end() && !it->second.empty()) ++c.ioc_edges;
  }

  const Component* best = nullptr;
  for (const auto& [root, c] : components) {
    if (!best) {
      best = &c;
      continue;
    }
    if (c.ioc_edges != best->ioc_edges) {
      if (c.ioc_edges > best->ioc_edges) best = &c;
    } else if (c.edges != best->edges) {
      if (c.edges > best->edges) best = &c;
    } else if (c.min_node < best->min_node) {
      best = &c;
    }
  }
  return static_cast<double>(best->edges) / static_cast<double>(window.edge_count());
}

DelayResult optimize_delay(const CausalGraph& g, const QuerySpec& spec) {
  if (spec.candidates.empty())
    throw EmptyCandidatesError("optimize_delay requires at least one delay candidate");
  if (spec.avg_len <= 0.0) throw std::invalid_argument("average length must be > 0");
  for (std::size_t i = 0; i < spec.candidates.size(); ++i) {
    if (spec.candidates[i] < 0.0)
      throw std::invalid_argument("delay candidates must be >= 0");
    if (i > 0 && spec.candidates[i] < spec.candidates[i - 1])
      throw std::invalid_argument("delay candidates must be ascending");
  }

  DelayResult result;
  bool have_best = false;
  double best_score = 0.0;
  for (double t : spec.candidates) {
    CausalGraph window = temp_graph(g, spec.timestamp, t);
    double score = inte_score(window, spec.avg_len) + inde_score(window);
    result.scores.emplace_back(t, score);
    // strict '>' keeps the smallest candidate on ties (ascending order)
    if (!have_best || score > best_score) {
      have_best = true;
      best_score = score;
      result.optimal_delay = t;
      result.window = std::move(window);
    }
  }
  return result;
}

}  // namespace causelog
