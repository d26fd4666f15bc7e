#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "causelog/cli.hpp"
#include "causelog/graph.hpp"

namespace {

namespace fs = std::filesystem;

const fs::path kSourceDir = CAUSELOG_SOURCE_DIR;
const std::string kConfig = (kSourceDir / "configs" / "default.toml").string();
const std::string kDns = (kSourceDir / "data" / "golden" / "dns.log").string();
const std::string kAudit = (kSourceDir / "data" / "golden" / "audit.log").string();
const std::string kAccess = (kSourceDir / "data" / "golden" / "access.log").string();

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("causelog_cli_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = causelog::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("usage errors exit with code 1") {
  TempDir tmp("usage");
  // -f without -al
  CHECK(run_cli({"--config", kConfig, "-f"}).code == 1);
  // -t without -al or --graph
  CHECK(run_cli({"--config", kConfig, "-t", "100"}).code == 1);
  // unknown flag
  CHECK(run_cli({"--bogus"}).code == 1);
  // no config anywhere
  unsetenv("CAUSELOG_CONFIG");
  CHECK(run_cli({"-a", kDns}).code == 1);
  // unknown entity type
  CHECK(run_cli({"--config", kConfig, "-a", kDns, "-e", "ip4,nope"}).code == 1);
  // nothing to do
  CHECK(run_cli({"--config", kConfig}).code == 1);
}

TEST_CASE("data errors exit with code 2") {
  TempDir tmp("data_err");
  CHECK(run_cli({"--config", kConfig, "-a",
                 (tmp.path / "unmatched.xyz").string(), "--out",
                 (tmp.path / "out").string()})
            .code == 2);
  CHECK(run_cli({"--config", (tmp.path / "no-such-config.toml").string(), "-a", kDns})
            .code == 2);
}

TEST_CASE("-a parses one source and writes the unified file and sub-graph") {
  TempDir tmp("single");
  RunResult r = run_cli({"--config", kConfig, "-a", kDns, "--out",
                         (tmp.path / "out").string(), "--assignments"});
  CHECK(r.code == 0);
  CHECK(fs::exists(tmp.path / "out" / "unified_dns.csv"));
  CHECK(fs::exists(tmp.path / "out" / "graph_dns.cgl"));
  CHECK(fs::exists(tmp.path / "out" / "assignments_dns.txt"));
  CHECK(r.out.find("dns:") != std::string::npos);
}

TEST_CASE("the config can come from CAUSELOG_CONFIG") {
  TempDir tmp("envvar");
  setenv("CAUSELOG_CONFIG", kConfig.c_str(), 1);
  RunResult r = run_cli({"-a", kDns, "--out", (tmp.path / "out").string()});
  unsetenv("CAUSELOG_CONFIG");
  CHECK(r.code == 0);
  CHECK(fs::exists(tmp.path / "out" / "unified_dns.csv"));
}

TEST_CASE("-al with -f writes the fused graph and timings") {
  TempDir tmp("fuse");
  RunResult r = run_cli({"--config", kConfig, "-al", kDns + "," + kAudit + "," + kAccess,
                         "-f", "--out", (tmp.path / "out").string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(tmp.path / "out" / "fused.cgl"));
  CHECK(fs::exists(tmp.path / "out" / "timings.jsonl"));
  CHECK(r.out.find("fused:") != std::string::npos);

  causelog::CausalGraph g = causelog::load_graph(tmp.path / "out" / "fused.cgl");
  CHECK(g.edge_count() > 0);
}

TEST_CASE("temporal queries print the score table and write the window graph") {
  TempDir tmp("query");
  RunResult r = run_cli({"--config", kConfig, "-al", kDns + "," + kAudit, "-f", "-t",
                         "1578220802", "--candidates", "5,30,600", "--avg-len", "4",
                         "--out", (tmp.path / "out").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("t-hat") != std::string::npos);
  CHECK(r.out.find("candidate  score") != std::string::npos);
  CHECK(fs::exists(tmp.path / "out" / "window_1578220802.cgl"));
}

TEST_CASE("a saved graph can be queried directly") {
  TempDir tmp("query_saved");
  RunResult first = run_cli({"--config", kConfig, "-al", kDns + "," + kAudit, "-f",
                             "--out", (tmp.path / "out").string()});
  REQUIRE(first.code == 0);
  RunResult r = run_cli({"--config", kConfig, "--graph",
                         (tmp.path / "out" / "fused.cgl").string(), "-t", "1578220802",
                         "--candidates", "10,60", "--out",
                         (tmp.path / "out2").string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(tmp.path / "out2" / "window_1578220802.cgl"));
}

TEST_CASE("identical runs produce byte-identical unified output") {
  TempDir tmp("repro");
  RunResult a = run_cli({"--config", kConfig, "-a", kAccess, "--out",
                         (tmp.path / "a").string()});
  RunResult b = run_cli({"--config", kConfig, "-a", kAccess, "--out",
                         (tmp.path / "b").string()});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(slurp(tmp.path / "a" / "unified_access.csv") ==
        slurp(tmp.path / "b" / "unified_access.csv"));
  CHECK(slurp(tmp.path / "a" / "graph_access.cgl") ==
        slurp(tmp.path / "b" / "graph_access.cgl"));
}

TEST_CASE("eval subcommand reports the metrics") {
  TempDir tmp("eval");
  RunResult parse = run_cli({"--config", kConfig, "-a", kDns, "--out",
                             (tmp.path / "out").string(), "--assignments"});
  REQUIRE(parse.code == 0);

  fs::path json = tmp.path / "report.json";
  RunResult r = run_cli({"eval", "--pred",
                         (tmp.path / "out" / "assignments_dns.txt").string(), "--truth",
                         (kSourceDir / "data" / "golden" / "truth_dns.txt").string(),
                         "--json", json.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("accuracy") != std::string::npos);
  std::string report = slurp(json);
  CHECK(report.find("\"accuracy\":1.0") != std::string::npos);
  CHECK(report.find("\"f1\":1.0") != std::string::npos);

  CHECK(run_cli({"eval", "--pred", "only"}).code == 1);
  CHECK(run_cli({"eval", "--pred", "a", "--truth", "b"}).code == 2);  // missing files
}

TEST_CASE("--explain prints triple provenance") {
  TempDir tmp("explain");
  RunResult r = run_cli({"--config", kConfig, "-a", kDns, "--out",
                         (tmp.path / "out").string(), "--explain"});
  CHECK(r.code == 0);
  CHECK(r.out.find("pattern#0") != std::string::npos);
}

TEST_CASE("--graphml exports viewer files") {
  TempDir tmp("graphml");
  RunResult r = run_cli({"--config", kConfig, "-al", kDns + "," + kAudit, "-f",
                         "--graphml", "--out", (tmp.path / "out").string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(tmp.path / "out" / "fused.graphml"));
}

TEST_CASE("help text lists the tool flags") {
  RunResult r = run_cli({"--help"});
  CHECK(r.code == 0);
  for (const char* flag : {"-a", "-e", "-al", "-f", "-t", "--candidates", "--avg-len"})
    CHECK(r.out.find(flag) != std::string::npos);
}
