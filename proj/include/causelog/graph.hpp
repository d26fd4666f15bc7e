#pragma once

#include <filesystem>
#include <map>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "causelog/types.hpp"

namespace causelog {

struct GraphEdge {
  std::string src;
  std::string dst;
  std::string action;
  double time = 0.0;
  int ordinal = 0;  // disambiguates identical (src, dst, action, time) re-emissions
  std::string source;
  std::map<std::string, std::string> attrs;

  bool operator==(const GraphEdge&) const = default;
};

// Identity under fusion: (src, dst, action, time, source, ordinal).
std::string edge_identity(const GraphEdge& e);

// Directed multigraph of entity nodes and timestamped action edges.
class CausalGraph {
 public:
  using AttrMap = std::map<std::string, std::string>;

  std::string name;

  const std::map<std::string, AttrMap>& nodes() const { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return nodes_.empty() && edges_.empty(); }

  const AttrMap* find_node(std::string_view id) const;

  // Inserts the node or replaces its attribute map (last writer wins).
  void set_node(const std::string& id, AttrMap attrs);

  // Inserts an edge (auto-inserting missing endpoints) or, when the identity
  // already exists, replaces its attributes. Returns true on insert.
  // Requires finite time and a non-empty action.
  bool upsert_edge(GraphEdge edge);

 private:
  std::map<std::string, AttrMap> nodes_;
  std::vector<GraphEdge> edges_;
  std::unordered_map<std::string, std::size_t> edge_index_;
};

// Same node set with equal attributes and same edge identities with equal
// attributes; the graph name is ignored.
bool structurally_equal(const CausalGraph& a, const CausalGraph& b);

// lowercase + trim
std::string normalize_entity(std::string_view entity);

// One node per distinct normalized entity, one directed edge per triple.
// Node type comes from the first full-matching entity regex ("other" when
// none matches).
CausalGraph build_subgraph(std::span<const EntityTriple> triples,
                           std::string_view source,
                           std::span<const std::pair<std::string, std::regex>> entity_regexes);

// Union of nodes and edges; attributes of shared identities come from the
// last graph in the list containing them. Throws EmptyGraphListError.
CausalGraph fuse(std::span<const CausalGraph> graphs);

// Canonical line-delimited format (see README for the exact layout).
void save_graph(const CausalGraph& g, const std::filesystem::path& path);
CausalGraph load_graph(const std::filesystem::path& path);

// GraphML export for external viewers (export only).
void export_graphml(const CausalGraph& g, const std::filesystem::path& path);

}  // namespace causelog
