#include "causelog/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <map>
#include <thread>

#include <json.hpp>

#include "causelog/errors.hpp"
#include "causelog/metrics.hpp"
#include "causelog/parsers.hpp"
#include "causelog/strutil.hpp"
#include "causelog/timeparse.hpp"
#include "causelog/triples.hpp"
#include "causelog/unify.hpp"

namespace causelog {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open log file: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(utf8_sanitize(line));
  }
  return lines;
}

std::vector<std::pair<std::string, std::regex>> selected_entities(
    const PipelineConfig& cfg, const PipelineOptions& options) {
  std::vector<std::pair<std::string, std::regex>> out;
  for (const std::string& name : options.entity_types) {
    const std::regex* re = cfg.entity_regex(name);
    if (!re)
      throw MalformedConfigError("entities." + name,
                                 "entity type requested but not configured");
    out.emplace_back(name, *re);
  }
  return out;
}

// Sorted key structure stands in for a template on key-value lines.
std::string kv_group_key(const std::map<std::string, std::string>& kv) {
  std::string key;
  for (const auto& [k, v] : kv) {
    if (!key.empty()) key += ',';
    key += k;
  }
  return key;
}

struct ParsedLine {
  ParsedEvent event;
  std::vector<Extraction> entities;  // General only
  std::string group_key;
};

}  // namespace

SourceResult run_source(const std::filesystem::path& path, const PipelineConfig& cfg,
                        const PipelineOptions& options, std::string app_name) {
  SourceResult result;
  result.app = std::move(app_name);
  if (result.app.empty()) result.app = path.stem().string();
  if (result.app.empty()) result.app = path.filename().string();

  const auto parse_start = Clock::now();
  result.category = classify_log(path.string(), cfg);
  std::vector<std::string> lines = read_lines(path);
  result.stats.lines = lines.size();

  std::vector<ParsedLine> parsed;
  parsed.reserve(lines.size());
  std::vector<std::pair<std::size_t, std::string>> rejects;  // (1-based line, reason)
  MineResult mined;

  switch (result.category) {
    case LogCategory::General: {
      auto entity_regexes = selected_entities(cfg, options);
      std::vector<std::string> masked;
      masked.reserve(lines.size());
      std::vector<std::string> raw_times(lines.size());
      std::vector<std::vector<Extraction>> extractions(lines.size());
      for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view body = lines[i];
        std::string rest;
        if (auto stamp = split_leading_timestamp(lines[i])) {
          raw_times[i] = stamp->first;
          rest = std::move(stamp->second);
          body = rest;
        }
        MaskResult m = mask_entities(body, entity_regexes);
        extractions[i] = std::move(m.entities);
        masked.push_back(std::move(m.masked));
      }
      if (!masked.empty()) {
        auto [depth, threshold] = auto_params(masked);
        mined = parse_general(masked, depth, threshold);
        for (std::size_t i = 0; i < mined.events.size(); ++i) {
          ParsedLine pl;
          pl.event = std::move(mined.events[i]);
          pl.event.raw_time = std::move(raw_times[i]);
          pl.entities = std::move(extractions[i]);
          pl.group_key = std::to_string(pl.event.template_id);
          parsed.push_back(std::move(pl));
        }
      }
      break;
    }
    case LogCategory::KeyValue: {
      for (std::size_t i = 0; i < lines.size(); ++i) {
        ParsedLine pl;
        pl.event.line_id = i;
        pl.event.kv = parse_kv(lines[i]);
        auto ts = pl.event.kv.find("_ts");
        if (ts != pl.event.kv.end()) pl.event.raw_time = ts->second;
        pl.group_key = kv_group_key(pl.event.kv);
        parsed.push_back(std::move(pl));
      }
      break;
    }
    case LogCategory::Request: {
      for (std::size_t i = 0; i < lines.size(); ++i) {
        auto ev = parse_request(lines[i], i);
        if (!ev) {
          rejects.emplace_back(i + 1, "malformed request line");
          continue;
        }
        ParsedLine pl;
        pl.event = std::move(*ev);
        pl.group_key = pl.event.kv["method"] + " " + pl.event.kv["path"];
        parsed.push_back(std::move(pl));
      }
      break;
    }
  }

  // POI projection + IOC tagging
  struct Kept {
    UnifiedRecord record;
    const ParsedLine* line;
  };
  std::vector<Kept> kept;
  kept.reserve(parsed.size());
  std::vector<std::string> assignments;
  for (const ParsedLine& pl : parsed) {
    std::span<const std::string> template_tokens;
    if (result.category == LogCategory::General && pl.event.template_id >= 0)
      template_tokens = mined.groups[static_cast<std::size_t>(pl.event.template_id)].tokens;
    try {
      UnifiedRecord rec = to_unified(pl.event, template_tokens, pl.entities,
                                     result.category, cfg, result.app);
      rec = tag_iocs(std::move(rec), cfg);
      kept.push_back(Kept{std::move(rec), &pl});
      if (options.write_assignments) assignments.push_back(pl.group_key);
    } catch (const MissingTimeError& e) {
      rejects.emplace_back(pl.event.line_id + 1, e.what());
    } catch (const UnparseableTimestampError& e) {
      rejects.emplace_back(pl.event.line_id + 1, e.what());
    }
  }
  result.stats.records = kept.size();
  result.stats.rejects = rejects.size();

  std::filesystem::create_directories(options.out_dir);
  result.unified_path = options.out_dir / ("unified_" + result.app + ".csv");
  {
    std::ofstream out(result.unified_path, std::ios::binary);
    if (!out) throw IoError("cannot write unified file: " + result.unified_path.string());
    std::string buffer = unified_csv_header();
    buffer += '\n';
    for (const Kept& k : kept) {
      buffer += unified_csv_row(k.record);
      buffer += '\n';
      if (buffer.size() > (1u << 20)) {
        out << buffer;
        buffer.clear();
      }
    }
    out << buffer;
    if (!out) throw IoError("write failed: " + result.unified_path.string());
  }
  if (options.write_assignments) {
    result.assignments_path = options.out_dir / ("assignments_" + result.app + ".txt");
    save_assignments(assignments, result.assignments_path);
  }
  if (!rejects.empty()) {
    result.reject_path = options.out_dir / ("rejects_" + result.app + ".txt");
    std::ofstream out(result.reject_path, std::ios::binary);
    if (!out) throw IoError("cannot write reject report: " + result.reject_path.string());
    for (const auto& [lineno, reason] : rejects) out << lineno << '\t' << reason << '\n';
  }
  result.timings.parse_seconds = seconds_since(parse_start);

  // Dependency extraction + causal sub-graph
  const auto graph_start = Clock::now();
  std::vector<EntityTriple> triples;
  std::vector<std::string>* explain = options.explain ? &result.explains : nullptr;
  const auto& pattern_map = cfg.compiled_patterns;
  bool has_category_patterns = [&] {
    auto it = pattern_map.find(result.category);
    return it != pattern_map.end() && !it->second.empty();
  }();
  for (const Kept& k : kept) {
    std::vector<EntityTriple> emitted;
    if (result.category == LogCategory::General || has_category_patterns) {
      std::span<const std::string> template_tokens;
      if (result.category == LogCategory::General && k.line->event.template_id >= 0)
        template_tokens =
            mined.groups[static_cast<std::size_t>(k.line->event.template_id)].tokens;
      emitted = extract_triples(k.record, k.line->event, template_tokens,
                                k.line->entities, cfg, result.category, explain);
    } else {
      emitted = default_triples(k.record, result.category, k.line->event.kv, explain);
    }
    if (emitted.empty()) ++result.stats.no_triple_records;
    for (EntityTriple& t : emitted) triples.push_back(std::move(t));
  }
  result.stats.triples = triples.size();
  result.graph = build_subgraph(triples, result.app, cfg.compiled_entities);
  result.timings.graph_seconds = seconds_since(graph_start);

  if (options.write_graph) {
    result.graph_path = options.out_dir / ("graph_" + result.app + ".cgl");
    save_graph(result.graph, result.graph_path);
  }
  return result;
}

FusedResult run_fused(const std::vector<std::filesystem::path>& paths,
                      const PipelineConfig& cfg, const PipelineOptions& options) {
  if (paths.empty()) throw EmptyGraphListError("run_fused requires at least one log path");

  FusedResult result;
  result.sources.resize(paths.size());
  std::vector<std::exception_ptr> errors(paths.size());

  // Duplicate stems would collide on output filenames and source labels.
  std::vector<std::string> app_names(paths.size());
  {
    std::map<std::string, int> seen;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      std::string stem = paths[i].stem().string();
      if (stem.empty()) stem = paths[i].filename().string();
      int n = ++seen[stem];
      app_names[i] = n == 1 ? stem : stem + "_" + std::to_string(n);
    }
  }

  int workers = options.workers > 0 ? options.workers : cfg.workers;
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers <= 0) workers = 1;
  workers = std::min<int>(workers, static_cast<int>(paths.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= paths.size()) return;
      try {
        result.sources[i] = run_source(paths[i], cfg, options, app_names[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);

  const auto fuse_start = Clock::now();
  std::vector<CausalGraph> graphs;
  graphs.reserve(result.sources.size());
  for (SourceResult& s : result.sources) graphs.push_back(s.graph);
  result.graph = fuse(graphs);
  result.timings.fuse_seconds = seconds_since(fuse_start);
  return result;
}

void write_timings_report(const FusedResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write timings report: " + path.string());
  for (const SourceResult& s : result.sources) {
    nlohmann::json j{{"dataset", s.app},
                     {"size", s.stats.lines},
                     {"semantic_log_parsing_seconds", s.timings.parse_seconds},
                     {"causal_graph_seconds", s.timings.graph_seconds}};
    out << j.dump() << '\n';
  }
  nlohmann::json fused{{"stage", "graph_fusion"},
                       {"seconds", result.timings.fuse_seconds},
                       {"nodes", result.graph.node_count()},
                       {"edges", result.graph.edge_count()}};
  out << fused.dump() << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace causelog
