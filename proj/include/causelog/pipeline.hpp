#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "causelog/config.hpp"
#include "causelog/graph.hpp"
#include "causelog/types.hpp"

namespace causelog {

struct StageTimings {
  double parse_seconds = 0.0;  // classify + parse + POI + unified output
  double graph_seconds = 0.0;  // triples + sub-graph construction
  double fuse_seconds = 0.0;   // run_fused only
};

struct SourceStats {
  std::size_t lines = 0;
  std::size_t records = 0;
  std::size_t rejects = 0;
  std::size_t triples = 0;
  std::size_t no_triple_records = 0;
};

struct PipelineOptions {
  std::filesystem::path out_dir = ".";
  std::vector<std::string> entity_types = {"ip4", "domain"};
  bool write_assignments = false;
  bool write_graph = true;
  bool explain = false;
  int workers = 0;  // 0 = config, then hardware
};

struct SourceResult {
  std::string app;  // source name, from the filename stem
  LogCategory category = LogCategory::General;
  CausalGraph graph;
  std::filesystem::path unified_path;
  std::filesystem::path reject_path;       // empty when nothing was rejected
  std::filesystem::path assignments_path;  // empty unless requested
  std::filesystem::path graph_path;        // empty unless written
  StageTimings timings;
  SourceStats stats;
  std::vector<std::string> explains;  // per-triple provenance, --explain only
};

struct FusedResult {
  CausalGraph graph;
  std::vector<SourceResult> sources;
  StageTimings timings;  // fuse_seconds populated
};

// Runs classify → parse → POI → unified output → triples → sub-graph for one
// log file, writing unified_<app>.csv (and optional companions) to out_dir.
// The app name defaults to the filename stem. Throws UnknownLogTypeError /
// IoError; per-line problems go to the reject report instead.
SourceResult run_source(const std::filesystem::path& path, const PipelineConfig& cfg,
                        const PipelineOptions& options, std::string app_name = {});

// run_source for every path (in parallel, bounded by the worker count), then
// fuses in argument order. Throws EmptyGraphListError for an empty list.
FusedResult run_fused(const std::vector<std::filesystem::path>& paths,
                      const PipelineConfig& cfg, const PipelineOptions& options);

// JSON-lines timing report mirroring the per-stage processing-time layout.
void write_timings_report(const FusedResult& result, const std::filesystem::path& path);

}  // namespace causelog
