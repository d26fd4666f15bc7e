#include "causelog/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>

#include <json.hpp>

#include "causelog/config.hpp"
#include "causelog/errors.hpp"
#include "causelog/metrics.hpp"
#include "causelog/pipeline.hpp"
#include "causelog/query.hpp"
#include "causelog/strutil.hpp"
#include "causelog/timeparse.hpp"

namespace causelog::cli {

namespace {

constexpr std::string_view kUsage = R"(causelog - multi-source log parsing, causal-graph fusion, temporal queries

usage:
  causelog [options] -a LOG                 parse one log source
  causelog [options] -al LOG,LOG,... -f     parse several sources and fuse
  causelog [options] -al ... -f -t STAMP    fuse, then query the fused graph
  causelog [options] --graph FILE -t STAMP  query a saved graph
  causelog eval --pred FILE --truth FILE [--json FILE]

options:
  -a, --app LOG              log file to parse (category from its filename)
  -e, --entities LIST        entity types to extract (default: ip4,domain)
  -al, --app-list LOG,...    ordered list of log files
  -f, --fuse                 fuse the -al sources (fusion order = list order)
  -t, --timestamp STAMP      temporal query timestamp (epoch or any supported format)
  --candidates LIST          delay-tolerance candidates in seconds
  --avg-len N                expected records per event trace
  --graph FILE               saved .cgl graph to query
  --config FILE              pipeline config (or CAUSELOG_CONFIG env var)
  --out DIR                  output directory (default .)
  --workers N                parallel source parsers
  --assignments              also write per-line group assignments
  --graphml                  also export graphs as GraphML
  --explain                  print which pattern produced each triple
  -h, --help                 this text

outputs (under --out): unified_<app>.csv, rejects_<app>.txt,
assignments_<app>.txt, graph_<app>.cgl, fused.cgl, window_<T>.cgl, timings.jsonl
)";

struct Args {
  std::optional<std::string> app;
  std::vector<std::string> app_list;
  std::string entities = "ip4,domain";
  bool fuse = false;
  std::optional<std::string> timestamp;
  std::optional<std::string> candidates;
  std::optional<double> avg_len;
  std::optional<std::string> graph_file;
  std::optional<std::string> config_path;
  std::string out_dir = ".";
  int workers = 0;
  bool assignments = false;
  bool graphml = false;
  bool explain = false;
  bool help = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Args parse_args(const std::vector<std::string>& argv) {
  Args args;
  std::size_t i = 0;
  auto value = [&](const std::string& flag) -> std::string {
    if (i + 1 >= argv.size()) throw UsageError("missing value for " + flag);
    return argv[++i];
  };
  for (; i < argv.size(); ++i) {
    const std::string& a = argv[i];
    if (a == "-a" || a == "--app") {
      args.app = value(a);
    } else if (a == "-al" || a == "--app-list") {
      for (const std::string& p : split(value(a), ','))
        if (!trim(p).empty()) args.app_list.push_back(trim(p));
    } else if (a == "-e" || a == "--entities") {
      args.entities = value(a);
    } else if (a == "-f" || a == "--fuse") {
      args.fuse = true;
    } else if (a == "-t" || a == "--timestamp") {
      args.timestamp = value(a);
    } else if (a == "--candidates") {
      args.candidates = value(a);
    } else if (a == "--avg-len") {
      std::string v = value(a);
      try {
        std::size_t used = 0;
        args.avg_len = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
      } catch (const std::exception&) {
        throw UsageError("bad --avg-len value '" + v + "'");
      }
    } else if (a == "--graph") {
      args.graph_file = value(a);
    } else if (a == "--config") {
      args.config_path = value(a);
    } else if (a == "--out") {
      args.out_dir = value(a);
    } else if (a == "--workers") {
      std::string v = value(a);
      try {
        args.workers = std::stoi(v);
      } catch (const std::exception&) {
        throw UsageError("bad --workers value '" + v + "'");
      }
      if (args.workers < 0) throw UsageError("--workers must be >= 0");
    } else if (a == "--assignments") {
      args.assignments = true;
    } else if (a == "--graphml") {
      args.graphml = true;
    } else if (a == "--explain") {
      args.explain = true;
    } else if (a == "-h" || a == "--help") {
      args.help = true;
    } else {
      throw UsageError("unknown argument '" + a + "'");
    }
  }
  return args;
}

PipelineConfig load_cli_config(const Args& args) {
  std::string path;
  if (args.config_path) {
    path = *args.config_path;
  } else if (const char* env = std::getenv("CAUSELOG_CONFIG"); env && *env) {
    path = env;
  } else {
    throw UsageError("no config given: pass --config or set CAUSELOG_CONFIG");
  }
  return load_config(path);
}

std::vector<double> parse_candidates(const std::string& text) {
  std::vector<double> out;
  for (const std::string& part : split(text, ',')) {
    std::string p = trim(part);
    if (p.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(p, &used);
    } catch (const std::exception&) {
      throw UsageError("bad candidate '" + p + "'");
    }
    if (used != p.size()) throw UsageError("bad candidate '" + p + "'");
    if (v < 0.0) throw UsageError("candidates must be >= 0");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty candidate list");
  std::sort(out.begin(), out.end());
  return out;
}

void print_source_summary(const SourceResult& s, std::ostream& out) {
  out << s.app << ": " << s.stats.lines << " lines, " << s.stats.records
      << " records, " << s.stats.rejects << " rejects, " << s.stats.triples
      << " triples, graph " << s.graph.node_count() << " nodes / "
      << s.graph.edge_count() << " edges (parse " << std::fixed
      << std::setprecision(3) << s.timings.parse_seconds << " s, graph "
      << s.timings.graph_seconds << " s)\n";
  out.unsetf(std::ios::floatfield);
}

void print_explains(const SourceResult& s, std::ostream& out) {
  for (const std::string& line : s.explains) out << "  [" << s.app << "] " << line << '\n';
}

int run_eval(const std::vector<std::string>& argv, std::ostream& out) {
  std::optional<std::string> pred, truth, json_path;
  for (std::size_t i = 0; i < argv.size(); ++i) {
    const std::string& a = argv[i];
    auto value = [&](const std::string& flag) -> std::string {
      if (i + 1 >= argv.size()) throw UsageError("missing value for " + flag);
      return argv[++i];
    };
    if (a == "--pred")
      pred = value(a);
    else if (a == "--truth")
      truth = value(a);
    else if (a == "--json")
      json_path = value(a);
    else
      throw UsageError("unknown eval argument '" + a + "'");
  }
  if (!pred || !truth) throw UsageError("eval needs --pred and --truth");

  std::vector<std::string> p = load_assignments(*pred);
  std::vector<std::string> t = load_assignments(*truth);
  EvalReport report = evaluate(p, t);

  out << "metric      value\n";
  out << std::fixed << std::setprecision(4);
  out << "accuracy    " << report.grouping.accuracy << "   (T_e=" << report.grouping.accurate_events
      << ", N_s=" << report.grouping.total_events << ")\n";
  out << "precision   " << report.pairwise.precision << "   (T_p=" << report.pairwise.true_pairs
      << ", N_p=" << report.pairwise.predicted_pairs << ")\n";
  out << "recall      " << report.pairwise.recall << "   (N_r=" << report.pairwise.real_pairs
      << ")\n";
  out << "f1          " << report.pairwise.f1 << "\n";
  out.unsetf(std::ios::floatfield);

  nlohmann::json j{{"accuracy", report.grouping.accuracy},
                   {"precision", report.pairwise.precision},
                   {"recall", report.pairwise.recall},
                   {"f1", report.pairwise.f1},
                   {"T_e", report.grouping.accurate_events},
                   {"N_s", report.grouping.total_events},
                   {"T_p", report.pairwise.true_pairs},
                   {"N_p", report.pairwise.predicted_pairs},
                   {"N_r", report.pairwise.real_pairs}};
  if (json_path) {
    std::ofstream jf(*json_path, std::ios::binary);
    if (!jf) throw IoError("cannot write " + *json_path);
    jf << j.dump() << '\n';
  } else {
    out << j.dump() << '\n';
  }
  return 0;
}

int run_impl(const std::vector<std::string>& argv, std::ostream& out) {
  if (!argv.empty() && argv[0] == "eval")
    return run_eval({argv.begin() + 1, argv.end()}, out);

  Args args = parse_args(argv);
  if (args.help || argv.empty()) {
    out << kUsage;
    return argv.empty() ? 1 : 0;
  }

  if (args.fuse && args.app_list.empty())
    throw UsageError("-f requires -al with at least one log file");
  if (args.timestamp && args.app_list.empty() && !args.graph_file)
    throw UsageError("-t requires -al (to build a fused graph) or --graph FILE");
  if (!args.app && args.app_list.empty() && !args.timestamp && !args.graph_file)
    throw UsageError("nothing to do: pass -a, -al, or --graph with -t (see --help)");
  if (!args.app_list.empty() && !args.fuse && !args.timestamp)
    throw UsageError("-al without -f or -t has no effect; pass -f to fuse");

  PipelineConfig cfg = load_cli_config(args);

  PipelineOptions options;
  options.out_dir = args.out_dir;
  options.explain = args.explain;
  options.write_assignments = args.assignments;
  options.workers = args.workers;
  options.entity_types.clear();
  for (const std::string& e : split(args.entities, ','))
    if (!trim(e).empty()) options.entity_types.push_back(trim(e));
  if (options.entity_types.empty()) throw UsageError("empty -e entity list");
  for (const std::string& e : options.entity_types)
    if (!cfg.entity_regex(e))
      throw UsageError("entity type '" + e + "' is not defined in the config");

  if (args.app) {
    SourceResult s = run_source(*args.app, cfg, options);
    print_source_summary(s, out);
    if (args.explain) print_explains(s, out);
    if (args.graphml)
      export_graphml(s.graph, std::filesystem::path(args.out_dir) /
                                  ("graph_" + s.app + ".graphml"));
  }

  std::optional<CausalGraph> fused;
  if (!args.app_list.empty()) {
    std::vector<std::filesystem::path> paths(args.app_list.begin(), args.app_list.end());
    FusedResult r = run_fused(paths, cfg, options);
    for (const SourceResult& s : r.sources) {
      print_source_summary(s, out);
      if (args.explain) print_explains(s, out);
    }
    out << "fused: " << r.graph.node_count() << " nodes / " << r.graph.edge_count()
        << " edges (fusion " << std::fixed << std::setprecision(3)
        << r.timings.fuse_seconds << " s)\n";
    out.unsetf(std::ios::floatfield);
    std::filesystem::create_directories(args.out_dir);
    save_graph(r.graph, std::filesystem::path(args.out_dir) / "fused.cgl");
    if (args.graphml)
      export_graphml(r.graph, std::filesystem::path(args.out_dir) / "fused.graphml");
    write_timings_report(r, std::filesystem::path(args.out_dir) / "timings.jsonl");
    fused = std::move(r.graph);
  }

  if (args.timestamp) {
    CausalGraph graph;
    if (fused) {
      graph = std::move(*fused);
    } else {
      graph = load_graph(*args.graph_file);
    }
    QuerySpec spec;
    spec.timestamp = parse_timestamp(*args.timestamp, cfg.default_year);
    spec.candidates = args.candidates ? parse_candidates(*args.candidates)
                                      : cfg.default_candidates;
    if (spec.candidates.empty())
      throw UsageError("no delay candidates: pass --candidates or set default_candidates");
    std::sort(spec.candidates.begin(), spec.candidates.end());
    spec.avg_len = args.avg_len ? *args.avg_len : cfg.default_avg_len;
    if (spec.avg_len <= 0.0) throw UsageError("--avg-len must be > 0");

    DelayResult r = optimize_delay(graph, spec);
    out << "T = " << format_time(spec.timestamp) << ", avg-len = " << spec.avg_len << "\n";
    out << "candidate  score\n";
    for (const auto& [t, score] : r.scores)
      out << format_time(t) << "  " << std::fixed << std::setprecision(4) << score
          << (t == r.optimal_delay ? "  <- t-hat" : "") << "\n";
    out.unsetf(std::ios::floatfield);
    out << "t-hat = " << format_time(r.optimal_delay) << ", window "
        << r.window.node_count() << " nodes / " << r.window.edge_count() << " edges\n";

    std::filesystem::create_directories(args.out_dir);
    std::filesystem::path window_path =
        std::filesystem::path(args.out_dir) /
        ("window_" + format_time(spec.timestamp) + ".cgl");
    save_graph(r.window, window_path);
    if (args.graphml)
      export_graphml(r.window, std::filesystem::path(args.out_dir) /
                                   ("window_" + format_time(spec.timestamp) + ".graphml"));
    out << "window graph written to " << window_path.string() << "\n";
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run_impl(args, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    err << "run 'causelog --help' for the flag list\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace causelog::cli
