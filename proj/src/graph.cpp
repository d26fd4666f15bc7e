#include "causelog/graph.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "causelog/errors.hpp"
#include "causelog/strutil.hpp"

namespace causelog {

namespace {

constexpr char kSep = '\x1f';
constexpr std::string_view kFileHeader = "causelog-graph v1";

std::string escape_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

bool unescape_field(std::string_view s, std::string& out) {
  out.clear();
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c != '\\') {
      out += c;
      continue;
    }
    if (++i >= s.size()) return false;
    switch (s[i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: return false;
    }
  }
  return true;
}

std::string attrs_to_json(const std::map<std::string, std::string>& attrs) {
  nlohmann::json j(attrs);
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

bool attrs_from_json(std::string_view text, std::map<std::string, std::string>& out) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return false;
  out.clear();
  for (auto& [k, v] : j.items()) {
    if (!v.is_string()) return false;
    out[k] = v.get<std::string>();
  }
  return true;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string edge_identity(const GraphEdge& e) {
  std::string key;
  key.reserve(e.src.size() + e.dst.size() + e.action.size() + e.source.size() + 40);
  key += e.src;
  key += kSep;
  key += e.dst;
  key += kSep;
  key += e.action;
  key += kSep;
  key += format_time(e.time);
  key += kSep;
  key += e.source;
  key += kSep;
  key += std::to_string(e.ordinal);
  return key;
}

const CausalGraph::AttrMap* CausalGraph::find_node(std::string_view id) const {
  auto it = nodes_.find(std::string(id));
  return it == nodes_.end() ? nullptr : &it->second;
}

void CausalGraph::set_node(const std::string& id, AttrMap attrs) {
  if (id.empty()) throw std::invalid_argument("node id must be non-empty");
  nodes_[id] = std::move(attrs);
}

bool CausalGraph::upsert_edge(GraphEdge edge) {
  if (edge.src.empty() || edge.dst.empty())
    throw std::invalid_argument("edge endpoints must be non-empty");
  if (edge.action.empty()) throw std::invalid_argument("edge action must be non-empty");
  if (!std::isfinite(edge.time)) throw std::invalid_argument("edge time must be finite");

  nodes_.try_emplace(edge.src);
  nodes_.try_emplace(edge.dst);

  std::string key = edge_identity(edge);
  auto [it, inserted] = edge_index_.try_emplace(key, edges_.size());
  if (inserted) {
    edges_.push_back(std::move(edge));
    return true;
  }
  edges_[it->second].attrs = std::move(edge.attrs);
  return false;
}

bool structurally_equal(const CausalGraph& a, const CausalGraph& b) {
  if (a.nodes() != b.nodes()) return false;
  if (a.edge_count() != b.edge_count()) return false;
  std::map<std::string, const GraphEdge*> index;
  for (const GraphEdge& e : a.edges()) index[edge_identity(e)] = &e;
  for (const GraphEdge& e : b.edges()) {
    auto it = index.find(edge_identity(e));
    if (it == index.end() || it->second->attrs != e.attrs) return false;
  }
  return true;
}

std::string normalize_entity(std::string_view entity) {
  return to_lower(trim_view(entity));
}

CausalGraph build_subgraph(std::span<const EntityTriple> triples,
                           std::string_view source,
                           std::span<const std::pair<std::string, std::regex>> entity_regexes) {
  CausalGraph g;
  g.name = std::string(source);

  auto entity_type = [&](std::string_view raw) -> std::string {
    std::string trimmed = trim(raw);
    for (const auto& [name, re] : entity_regexes)
      if (std::regex_match(trimmed, re)) return name;
    return "other";
  };

  std::unordered_map<std::string, int> ordinals;
  for (const EntityTriple& t : triples) {
    std::string src = normalize_entity(t.subject);
    std::string dst = normalize_entity(t.object);
    if (src.empty() || dst.empty() || t.action.empty()) continue;

    if (!g.find_node(src))
      g.set_node(src, {{"type", entity_type(t.subject)}, {"source", g.name}});
    if (!g.find_node(dst))
      g.set_node(dst, {{"type", entity_type(t.object)}, {"source", g.name}});

    GraphEdge e;
    e.src = std::move(src);
    e.dst = std::move(dst);
    e.action = t.action;
    e.time = t.time;
    e.source = g.name;
    e.attrs = t.attrs;
    e.attrs.erase("source");  // carried structurally
    std::string slot = e.src;
    slot += kSep;
    slot += e.dst;
    slot += kSep;
    slot += e.action;
    slot += kSep;
    slot += format_time(e.time);
    e.ordinal = ordinals[slot]++;
    g.upsert_edge(std::move(e));
  }
  return g;
}

CausalGraph fuse(std::span<const CausalGraph> graphs) {
  if (graphs.empty()) throw EmptyGraphListError("fuse requires at least one sub-graph");
  CausalGraph fused;
  fused.name = "fused";
  for (const CausalGraph& g : graphs) {
    for (const auto& [id, attrs] : g.nodes()) fused.set_node(id, attrs);
    for (const GraphEdge& e : g.edges()) fused.upsert_edge(e);
  }
  return fused;
}

void save_graph(const CausalGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write graph file: " + path.string());
  out << kFileHeader << '\n';
  out << "G\t" << escape_field(g.name) << '\n';
  for (const auto& [id, attrs] : g.nodes())
    out << "N\t" << escape_field(id) << '\t' << attrs_to_json(attrs) << '\n';
  for (const GraphEdge& e : g.edges()) {
    out << "E\t" << escape_field(e.src) << '\t' << escape_field(e.dst) << '\t'
        << escape_field(e.action) << '\t' << format_time(e.time) << '\t' << e.ordinal
        << '\t' << escape_field(e.source) << '\t' << attrs_to_json(e.attrs) << '\n';
  }
  out << "C\t" << g.node_count() << '\t' << g.edge_count() << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

CausalGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open graph file: " + path.string());

  CausalGraph g;
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false, saw_name = false, saw_counts = false;
  std::size_t declared_nodes = 0, declared_edges = 0;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      if (line != kFileHeader)
        throw CorruptGraphFileError(lineno, "bad header '" + line + "'");
      saw_header = true;
      continue;
    }
    if (saw_counts) throw CorruptGraphFileError(lineno, "data after counts line");
    if (line.empty()) throw CorruptGraphFileError(lineno, "blank line");

    std::vector<std::string> fields = split(line, '\t');
    const std::string& tag = fields[0];
    if (tag == "G") {
      if (fields.size() != 2 || saw_name)
        throw CorruptGraphFileError(lineno, "bad graph name record");
      if (!unescape_field(fields[1], g.name))
        throw CorruptGraphFileError(lineno, "bad escape in graph name");
      saw_name = true;
    } else if (tag == "N") {
      if (fields.size() != 3) throw CorruptGraphFileError(lineno, "node record needs 3 fields");
      std::string id;
      if (!unescape_field(fields[1], id) || id.empty())
        throw CorruptGraphFileError(lineno, "bad node id");
      CausalGraph::AttrMap attrs;
      if (!attrs_from_json(fields[2], attrs))
        throw CorruptGraphFileError(lineno, "bad node attributes");
      if (g.find_node(id)) throw CorruptGraphFileError(lineno, "duplicate node '" + id + "'");
      g.set_node(id, std::move(attrs));
    } else if (tag == "E") {
      if (fields.size() != 8) throw CorruptGraphFileError(lineno, "edge record needs 8 fields");
      GraphEdge e;
      if (!unescape_field(fields[1], e.src) || !unescape_field(fields[2], e.dst) ||
          !unescape_field(fields[3], e.action) || !unescape_field(fields[6], e.source))
        throw CorruptGraphFileError(lineno, "bad escape in edge record");
      const std::string& time_text = fields[4];
      auto tr = std::from_chars(time_text.data(), time_text.data() + time_text.size(), e.time);
      if (tr.ec != std::errc{} || tr.ptr != time_text.data() + time_text.size() ||
          !std::isfinite(e.time))
        throw CorruptGraphFileError(lineno, "bad edge time '" + time_text + "'");
      const std::string& ord_text = fields[5];
      auto orr = std::from_chars(ord_text.data(), ord_text.data() + ord_text.size(), e.ordinal);
      if (orr.ec != std::errc{} || orr.ptr != ord_text.data() + ord_text.size() || e.ordinal < 0)
        throw CorruptGraphFileError(lineno, "bad edge ordinal '" + ord_text + "'");
      if (!attrs_from_json(fields[7], e.attrs))
        throw CorruptGraphFileError(lineno, "bad edge attributes");
      if (e.src.empty() || e.dst.empty() || e.action.empty())
        throw CorruptGraphFileError(lineno, "edge with empty endpoint or action");
      std::size_t nodes_before = g.node_count();
      if (!g.upsert_edge(std::move(e)))
        throw CorruptGraphFileError(lineno, "duplicate edge identity");
      if (g.node_count() != nodes_before)
        throw CorruptGraphFileError(lineno, "edge references undeclared node");
    } else if (tag == "C") {
      if (fields.size() != 3) throw CorruptGraphFileError(lineno, "counts record needs 3 fields");
      auto parse_count = [&](const std::string& text, std::size_t& out) {
        auto r = std::from_chars(text.data(), text.data() + text.size(), out);
        if (r.ec != std::errc{} || r.ptr != text.data() + text.size())
          throw CorruptGraphFileError(lineno, "bad count '" + text + "'");
      };
      parse_count(fields[1], declared_nodes);
      parse_count(fields[2], declared_edges);
      saw_counts = true;
    } else {
      throw CorruptGraphFileError(lineno, "unknown record tag '" + tag + "'");
    }
  }

  if (!saw_header) throw CorruptGraphFileError(1, "empty file");
  if (!saw_name) throw CorruptGraphFileError(lineno, "missing graph name record");
  if (!saw_counts) throw CorruptGraphFileError(lineno, "truncated file: missing counts record");
  if (declared_nodes != g.node_count() || declared_edges != g.edge_count())
    throw CorruptGraphFileError(lineno, "truncated file: counts do not match records");
  return g;
}

void export_graphml(const CausalGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write graphml file: " + path.string());

  std::map<std::string, std::string> node_keys, edge_keys;
  for (const auto& [id, attrs] : g.nodes())
    for (const auto& [k, v] : attrs) node_keys.emplace(k, "");
  for (const GraphEdge& e : g.edges())
    for (const auto& [k, v] : e.attrs) edge_keys.emplace(k, "");

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
  int key_id = 0;
  for (auto& [name, id] : node_keys) {
    id = "d" + std::to_string(key_id++);
    out << "  <key id=\"" << id << "\" for=\"node\" attr.name=\"" << xml_escape(name)
        << "\" attr.type=\"string\"/>\n";
  }
  std::map<std::string, std::string> fixed_edge_keys = {
      {"action", ""}, {"time", ""}, {"source", ""}, {"ordinal", ""}};
  for (auto& [name, id] : fixed_edge_keys) {
    id = "d" + std::to_string(key_id++);
    out << "  <key id=\"" << id << "\" for=\"edge\" attr.name=\"" << xml_escape(name)
        << "\" attr.type=\"string\"/>\n";
  }
  for (auto& [name, id] : edge_keys) {
    if (fixed_edge_keys.count(name)) continue;
    id = "d" + std::to_string(key_id++);
    out << "  <key id=\"" << id << "\" for=\"edge\" attr.name=\"" << xml_escape(name)
        << "\" attr.type=\"string\"/>\n";
  }
  out << "  <graph id=\"" << xml_escape(g.name) << "\" edgedefault=\"directed\">\n";
  for (const auto& [id, attrs] : g.nodes()) {
    out << "    <node id=\"" << xml_escape(id) << "\">";
    for (const auto& [k, v] : attrs)
      out << "<data key=\"" << node_keys[k] << "\">" << xml_escape(v) << "</data>";
    out << "</node>\n";
  }
  for (const GraphEdge& e : g.edges()) {
    out << "    <edge source=\"" << xml_escape(e.src) << "\" target=\""
        << xml_escape(e.dst) << "\">";
    out << "<data key=\"" << fixed_edge_keys["action"] << "\">" << xml_escape(e.action)
        << "</data>";
    out << "<data key=\"" << fixed_edge_keys["time"] << "\">" << format_time(e.time)
        << "</data>";
    out << "<data key=\"" << fixed_edge_keys["source"] << "\">" << xml_escape(e.source)
        << "</data>";
    out << "<data key=\"" << fixed_edge_keys["ordinal"] << "\">" << e.ordinal << "</data>";
    for (const auto& [k, v] : e.attrs) {
      if (fixed_edge_keys.count(k)) continue;
      out << "<data key=\"" << edge_keys[k] << "\">" << xml_escape(v) << "</data>";
    }
    out << "</edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace causelog
