#include <doctest.h>

#include <random>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "causelog/config.hpp"
#include "causelog/errors.hpp"
#include "causelog/parsers.hpp"
#include "causelog/strutil.hpp"

using namespace causelog;

namespace {

std::vector<std::pair<std::string, std::regex>> default_entities() {
  std::vector<std::pair<std::string, std::regex>> out;
  out.emplace_back("ip4", std::regex(R"((?:\d{1,3}\.){3}\d{1,3})"));
  out.emplace_back("domain", std::regex(R"(\b(?:[A-Za-z0-9-]+\.)+[A-Za-z]{2,}\b)"));
  return out;
}

PipelineConfig tiny_config() {
  return config_from_toml(toml::parse(R"cfg(
[categories]
"dns*" = "general"
"audit*" = "keyvalue"
"access*" = "request"
[entities]
ip4 = '(?:\d{1,3}\.){3}\d{1,3}'
domain = '\b(?:[A-Za-z0-9-]+\.)+[A-Za-z]{2,}\b'
)cfg"));
}

}  // namespace

// ---- classify_log ----------------------------------------------------------

TEST_CASE("classify_log picks the first matching pattern") {
  PipelineConfig cfg = tiny_config();
  CHECK(classify_log("dns.log", cfg) == LogCategory::General);
  CHECK(classify_log("audit.log", cfg) == LogCategory::KeyValue);
  CHECK(classify_log("access.log", cfg) == LogCategory::Request);
  CHECK(classify_log("/var/log/dns.log", cfg) == LogCategory::General);
  CHECK_THROWS_AS(classify_log("weird.bin", cfg), UnknownLogTypeError);
}

TEST_CASE("classify_log respects config order") {
  PipelineConfig cfg = config_from_toml(toml::parse(R"cfg(
[categories]
"dns-special.log" = "request"
"dns*" = "general"
[entities]
ip4 = 'x'
domain = 'y'
)cfg"));
  CHECK(classify_log("dns-special.log", cfg) == LogCategory::Request);
  CHECK(classify_log("dns-other.log", cfg) == LogCategory::General);
}

// ---- mask_entities ---------------------------------------------------------

TEST_CASE("mask_entities replaces matches with typed placeholders") {
  auto regexes = default_entities();

  MaskResult one = mask_entities("connect from 10.0.0.1", regexes);
  CHECK(one.masked == "connect from <IP4>");
  REQUIRE(one.entities.size() == 1);
  CHECK(one.entities[0].type == "ip4");
  CHECK(one.entities[0].value == "10.0.0.1");
  CHECK(one.entities[0].begin == 13);

  MaskResult two = mask_entities("query example.com from 10.0.0.2", regexes);
  CHECK(two.masked == "query <DOMAIN> from <IP4>");
  REQUIRE(two.entities.size() == 2);
  CHECK(two.entities[0].type == "domain");
  CHECK(two.entities[0].value == "example.com");
  CHECK(two.entities[1].type == "ip4");
  CHECK(two.entities[1].value == "10.0.0.2");

  MaskResult none = mask_entities("no entities here", regexes);
  CHECK(none.masked == "no entities here");
  CHECK(none.entities.empty());
}

TEST_CASE("mask_entities preserves token counts for single-token placeholders") {
  auto regexes = default_entities();
  std::mt19937 rng(17);
  std::vector<std::string> words = {"alpha", "10.0.0.5", "beta.example.org", "x9",
                                    "gamma", "172.16.254.3", "delta"};
  for (int iter = 0; iter < 100; ++iter) {
    std::size_t n = 1 + rng() % 8;
    std::vector<std::string> toks;
    for (std::size_t i = 0; i < n; ++i) toks.push_back(words[rng() % words.size()]);
    std::string line = join(toks, " ");
    MaskResult m = mask_entities(line, regexes);
    CHECK(split_ws(m.masked).size() == split_ws(line).size());
  }
}

// ---- auto_params -----------------------------------------------------------

TEST_CASE("auto_params clamps to 0.7 when nothing varies") {
  std::vector<std::string> lines(8, "server started cleanly");
  auto [depth, threshold] = auto_params(lines);
  CHECK(depth == 4);
  CHECK(threshold == 0.7);
}

TEST_CASE("auto_params clamps to 0.3 when every token differs per line") {
  std::vector<std::string> lines;
  for (int i = 0; i < 15; ++i) {
    // distinct digit-free tokens in every position; each occurs in 1/15 < 10%
    std::string a(1, static_cast<char>('a' + i));
    lines.push_back("tok" + a + "x topic" + a + " verb" + a);
  }
  auto [depth, threshold] = auto_params(lines);
  CHECK(depth == 4);
  CHECK(threshold == 0.3);
}

TEST_CASE("auto_params derives the threshold from the variable-slot fraction") {
  // 10 lines, 5 tokens, 2 variable slots (digit-bearing) -> v = 0.4 -> 0.6
  std::vector<std::string> lines;
  for (int i = 0; i < 10; ++i)
    lines.push_back("task run" + std::to_string(40 + i) + " started by user0" +
                    std::to_string(i));
  auto [depth, threshold] = auto_params(lines);
  CHECK(depth == 4);
  CHECK(threshold == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("auto_params rejects an empty sample") {
  std::vector<std::string> none;
  CHECK_THROWS_AS(auto_params(none), EmptySampleError);
}

// ---- parse_general ---------------------------------------------------------

TEST_CASE("identical masked lines share one template") {
  std::vector<std::string> lines = {"connect from <IP4>", "connect from <IP4>"};
  MineResult r = parse_general(lines, 4, 0.5);
  REQUIRE(r.groups.size() == 1);
  CHECK(r.groups[0].text() == "connect from <IP4>");
  CHECK(r.groups[0].count() == 2);
  REQUIRE(r.events.size() == 2);
  CHECK(r.events[0].template_id == r.events[1].template_id);
  // the placeholder slot is part of the template, not a parameter
  CHECK(r.events[0].params.empty());
}

TEST_CASE("similar lines merge and mismatches become wildcards") {
  std::vector<std::string> lines = {"session opened for user alice",
                                    "session opened for user bob"};
  MineResult r = parse_general(lines, 4, 0.5);
  REQUIRE(r.groups.size() == 1);
  CHECK(r.groups[0].text() == "session opened for user <*>");
  REQUIRE(r.events.size() == 2);
  CHECK(r.events[0].params == std::vector<std::string>{"alice"});
  CHECK(r.events[1].params == std::vector<std::string>{"bob"});
}

TEST_CASE("dissimilar lines found separate groups") {
  std::vector<std::string> lines = {"session opened for user alice",
                                    "failed password attempt limit"};
  MineResult r = parse_general(lines, 4, 0.3);
  CHECK(r.groups.size() == 2);
  CHECK(r.events[0].template_id != r.events[1].template_id);
}

TEST_CASE("parse_general is deterministic and conserves line counts") {
  std::mt19937 rng(23);
  std::vector<std::string> verbs = {"open", "close", "read", "write"};
  std::vector<std::string> objs = {"file", "socket", "pipe"};
  for (int iter = 0; iter < 30; ++iter) {
    std::vector<std::string> lines;
    std::size_t n = 1 + rng() % 60;
    for (std::size_t i = 0; i < n; ++i) {
      std::string line = verbs[rng() % verbs.size()] + " " + objs[rng() % objs.size()];
      if (rng() % 2) line += " id" + std::to_string(rng() % 5);
      if (rng() % 3 == 0) line += " extra";
      lines.push_back(line);
    }
    MineResult a = parse_general(lines, 4, 0.5);
    MineResult b = parse_general(lines, 4, 0.5);

    // determinism
    REQUIRE(a.groups.size() == b.groups.size());
    for (std::size_t g = 0; g < a.groups.size(); ++g) {
      CHECK(a.groups[g].tokens == b.groups[g].tokens);
      CHECK(a.groups[g].member_ids == b.groups[g].member_ids);
    }

    // count conservation: every line in exactly one group
    std::size_t total = 0;
    std::set<std::size_t> seen;
    for (const TemplateGroup& g : a.groups) {
      total += g.count();
      for (std::size_t id : g.member_ids) CHECK(seen.insert(id).second);
    }
    CHECK(total == lines.size());

    // template consistency + param arity
    for (const TemplateGroup& g : a.groups) {
      std::size_t wildcards = 0;
      for (const std::string& t : g.tokens)
        if (t == kWildcard) ++wildcards;
      for (std::size_t id : g.member_ids) {
        CHECK(split_ws(lines[id]).size() == g.tokens.size());
        CHECK(a.events[id].params.size() == wildcards);
      }
    }
  }
}

TEST_CASE("parse_general validates its parameters") {
  std::vector<std::string> lines = {"a b"};
  CHECK_THROWS_AS(parse_general(lines, 2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(parse_general(lines, 4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(parse_general(lines, 4, 1.0), std::invalid_argument);
}

// ---- parse_kv ---------------------------------------------------------------

TEST_CASE("parse_kv extracts bare pairs") {
  auto kv = parse_kv("type=SYSCALL pid=123");
  CHECK(kv == std::map<std::string, std::string>{{"type", "SYSCALL"}, {"pid", "123"}});
}

TEST_CASE("parse_kv expands the audit envelope") {
  auto kv = parse_kv(R"(msg=audit(1577836800.123:456) exe="/usr/bin/sshd")");
  CHECK(kv == std::map<std::string, std::string>{
                  {"_ts", "1577836800.123"}, {"_serial", "456"}, {"exe", "/usr/bin/sshd"}});
}

TEST_CASE("parse_kv keeps the last duplicate and collects free text") {
  auto kv = parse_kv("hello a=1 a=2");
  CHECK(kv == std::map<std::string, std::string>{{"_free", "hello"}, {"a", "2"}});
}

TEST_CASE("parse_kv handles quoted values with spaces") {
  auto kv = parse_kv(R"(cmd="ls -la /tmp" user='a b' flag=1)");
  CHECK(kv["cmd"] == "ls -la /tmp");
  CHECK(kv["user"] == "a b");
  CHECK(kv["flag"] == "1");
}

TEST_CASE("parse_kv keeps non-audit msg values as plain pairs") {
  auto kv = parse_kv("msg=hello type=X");
  CHECK(kv["msg"] == "hello");
  CHECK(kv["type"] == "X");
}

TEST_CASE("re-emitting clean k=v lines reproduces the token multiset") {
  std::mt19937 rng(31);
  for (int iter = 0; iter < 50; ++iter) {
    std::size_t n = 1 + rng() % 8;
    std::set<std::string> keys;
    while (keys.size() < n) keys.insert("k" + std::to_string(rng() % 50));
    std::vector<std::string> tokens;
    for (const std::string& k : keys)
      tokens.push_back(k + "=v" + std::to_string(rng() % 100));
    std::string line = join(tokens, " ");

    auto kv = parse_kv(line);
    std::multiset<std::string> expected(tokens.begin(), tokens.end());
    std::multiset<std::string> actual;
    for (const auto& [k, v] : kv) actual.insert(k + "=" + v);
    CHECK(actual == expected);
  }
}

// ---- parse_request ----------------------------------------------------------

TEST_CASE("parse_request maps the combined layout") {
  auto ev = parse_request(
      R"(10.0.0.5 - - [01/Jan/2020:00:00:00 +0000] "GET /index.php?id=1 HTTP/1.1" 200 512 "-" "curl/7.68")",
      7);
  REQUIRE(ev.has_value());
  CHECK(ev->line_id == 7);
  CHECK(ev->raw_time == "01/Jan/2020:00:00:00 +0000");
  CHECK(ev->kv["client"] == "10.0.0.5");
  CHECK(ev->kv["method"] == "GET");
  CHECK(ev->kv["path"] == "/index.php");
  CHECK(ev->kv["query"] == "id=1");
  CHECK(ev->kv["status"] == "200");
  CHECK(ev->kv["agent"] == "curl/7.68");
}

TEST_CASE("parse_request yields an empty query when the URL has none") {
  auto ev = parse_request(
      R"(10.0.0.5 - - [01/Jan/2020:00:00:00 +0000] "GET /index.php HTTP/1.1" 200 512 "-" "curl/7.68")");
  REQUIRE(ev.has_value());
  CHECK(ev->kv["path"] == "/index.php");
  CHECK(ev->kv["query"] == "");
}

TEST_CASE("parse_request rejects malformed lines") {
  CHECK_FALSE(parse_request("garbage line").has_value());
  CHECK_FALSE(parse_request("").has_value());
  CHECK_FALSE(parse_request("a b c d e").has_value());
}

// ---- glob matching ----------------------------------------------------------

TEST_CASE("glob_match semantics") {
  CHECK(glob_match("dns*", "dns.log"));
  CHECK(glob_match("dns*", "dns"));
  CHECK(glob_match("*.log", "audit.log"));
  CHECK(glob_match("a?c", "abc"));
  CHECK_FALSE(glob_match("a?c", "abbc"));
  CHECK_FALSE(glob_match("dns*", "xdns.log"));
  CHECK(glob_match("*", "anything"));
}
