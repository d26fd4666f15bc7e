#include <doctest.h>

#include <string>
#include <vector>

#include "causelog/config.hpp"
#include "causelog/parsers.hpp"
#include "causelog/strutil.hpp"
#include "causelog/triples.hpp"
#include "causelog/unify.hpp"

using namespace causelog;

namespace {

PipelineConfig pattern_config() {
  return config_from_toml(toml::parse(R"cfg(
default_year = 2020
internal_prefixes = ["10."]

[categories]
"dns*" = "general"

[entities]
ip4 = '(?:\d{1,3}\.){3}\d{1,3}'
domain = '\b(?:[A-Za-z0-9-]+\.)+[A-Za-z]{2,}\b'

[lexicon]
actions = ["query", "opened", "reply"]

[[patterns.general]]
action = "query"
subject = "col:Src_IP"
object = "col:Domain"

[[patterns.general]]
action = "opened"
subject = "col:Domain"
object = "param:0"

[[patterns.general]]
action = "*"
subject = "entity:ip4:0"
object = "entity:ip4:1"
)cfg"));
}

UnifiedRecord dns_record() {
  UnifiedRecord rec;
  rec.time = 1577836800.0;
  rec.src_ip = "10.0.0.2";
  rec.domain = "evil.com";
  rec.actions = "query";
  rec.proto = "udp";
  rec.direction = Direction::Out;
  rec.source = "dns";
  return rec;
}

}  // namespace

TEST_CASE("a dns pattern emits (src_ip, query, domain)") {
  PipelineConfig cfg = pattern_config();
  UnifiedRecord rec = dns_record();
  ParsedEvent ev;
  std::vector<std::string> tmpl = {"query", "<DOMAIN>", "from", "<IP4>"};

  auto triples = extract_triples(rec, ev, tmpl, {}, cfg);
  REQUIRE(triples.size() == 1);
  CHECK(triples[0].subject == "10.0.0.2");
  CHECK(triples[0].action == "query");
  CHECK(triples[0].object == "evil.com");
  CHECK(triples[0].time == rec.time);
  CHECK(triples[0].attrs.at("source") == "dns");
  CHECK(triples[0].attrs.at("proto") == "udp");
  CHECK(triples[0].attrs.at("direction") == "out");
}

TEST_CASE("a record with no subject endpoint extracts nothing") {
  PipelineConfig cfg = pattern_config();
  UnifiedRecord rec = dns_record();
  rec.src_ip.clear();
  ParsedEvent ev;
  std::vector<std::string> tmpl = {"query", "<DOMAIN>"};
  std::vector<std::string> why;
  auto triples = extract_triples(rec, ev, tmpl, {}, cfg, LogCategory::General, &why);
  CHECK(triples.empty());
  CHECK_FALSE(why.empty());
}

TEST_CASE("template slots resolve as objects") {
  PipelineConfig cfg = pattern_config();
  UnifiedRecord rec;
  rec.time = 1.0;
  rec.domain = "host1";
  rec.source = "auth";
  ParsedEvent ev;
  ev.params = {"alice"};
  std::vector<std::string> tmpl = {"session", "opened", "for", "user", "<*>"};

  auto triples = extract_triples(rec, ev, tmpl, {}, cfg);
  REQUIRE(triples.size() == 1);
  CHECK(triples[0].subject == "host1");
  CHECK(triples[0].action == "opened");
  CHECK(triples[0].object == "alice");
}

TEST_CASE("all matching patterns fire") {
  PipelineConfig cfg = pattern_config();
  UnifiedRecord rec = dns_record();
  ParsedEvent ev;
  // 'query' matches pattern 0 and the wildcard pattern 2 (two ip4 entities)
  std::vector<Extraction> entities = {{"ip4", "10.0.0.2", 0, 8},
                                      {"ip4", "10.0.0.9", 10, 18}};
  std::vector<std::string> tmpl = {"query", "<IP4>", "to", "<IP4>"};
  auto triples = extract_triples(rec, ev, tmpl, entities, cfg);
  REQUIRE(triples.size() == 2);
  CHECK(triples[0].object == "evil.com");   // config order: col pattern first
  CHECK(triples[1].subject == "10.0.0.2");
  CHECK(triples[1].object == "10.0.0.9");
}

TEST_CASE("guards filter patterns") {
  PipelineConfig cfg = config_from_toml(toml::parse(R"cfg(
[categories]
"dns*" = "general"
[entities]
ip4 = '(?:\d{1,3}\.){3}\d{1,3}'
domain = 'x'
[lexicon]
actions = ["query"]
[[patterns.general]]
action = "query"
subject = "col:Src_IP"
object = "col:Domain"
guard = "Proto=udp"
)cfg"));
  UnifiedRecord rec = dns_record();
  ParsedEvent ev;
  std::vector<std::string> tmpl = {"query"};
  CHECK(extract_triples(rec, ev, tmpl, {}, cfg).size() == 1);
  rec.proto = "tcp";
  CHECK(extract_triples(rec, ev, tmpl, {}, cfg).empty());
}

TEST_CASE("default request relation") {
  UnifiedRecord rec;
  rec.time = 1577836800.0;
  rec.src_ip = "10.0.0.5";
  rec.actions = "GET";
  rec.domain = "/index.php";
  rec.parameters = "id=1";
  rec.status = "200";
  rec.source = "access";

  auto triples = default_triples(rec, LogCategory::Request, {});
  REQUIRE(triples.size() == 1);
  CHECK(triples[0].subject == "10.0.0.5");
  CHECK(triples[0].action == "GET");
  CHECK(triples[0].object == "/index.php");
  CHECK(triples[0].attrs.at("parameters") == "id=1");
  CHECK(triples[0].attrs.at("status") == "200");
}

TEST_CASE("default keyvalue relation uses the pid-qualified subject") {
  UnifiedRecord rec;
  rec.time = 1577836800.123;
  rec.pid = "123";
  rec.actions = "SYSCALL";
  rec.source = "audit";
  std::map<std::string, std::string> kv{{"exe", "/usr/bin/sshd"}};

  auto triples = default_triples(rec, LogCategory::KeyValue, kv);
  REQUIRE(triples.size() == 1);
  CHECK(triples[0].subject == "pid:123");
  CHECK(triples[0].action == "SYSCALL");
  CHECK(triples[0].object == "/usr/bin/sshd");
  CHECK(triples[0].time == rec.time);

  SUBCASE("exe/path/address priority") {
    kv = {{"path", "/etc/passwd"}, {"address", "10.1.1.1"}};
    auto t2 = default_triples(rec, LogCategory::KeyValue, kv);
    REQUIRE(t2.size() == 1);
    CHECK(t2[0].object == "/etc/passwd");
    kv = {{"address", "10.1.1.1"}};
    auto t3 = default_triples(rec, LogCategory::KeyValue, kv);
    REQUIRE(t3.size() == 1);
    CHECK(t3[0].object == "10.1.1.1");
  }
}

TEST_CASE("audit records without pid or target yield nothing") {
  UnifiedRecord rec;
  rec.time = 1.0;
  rec.actions = "SYSCALL";
  rec.source = "audit";
  CHECK(default_triples(rec, LogCategory::KeyValue, {}).empty());
  rec.pid = "9";
  CHECK(default_triples(rec, LogCategory::KeyValue, {}).empty());  // no exe/path/address
}

TEST_CASE("emitted triples always satisfy the type invariants") {
  PipelineConfig cfg = pattern_config();
  UnifiedRecord rec = dns_record();
  rec.iocs = {"scanner"};
  ParsedEvent ev;
  std::vector<std::string> tmpl = {"query", "x"};
  for (const EntityTriple& t : extract_triples(rec, ev, tmpl, {}, cfg)) {
    CHECK_FALSE(t.subject.empty());
    CHECK_FALSE(t.action.empty());
    CHECK_FALSE(t.object.empty());
    CHECK(t.attrs.at("source") == rec.source);
    CHECK(t.time == rec.time);
    CHECK(t.attrs.at("ioc") == "scanner");
  }
}

TEST_CASE("pattern evaluation is deterministic") {
  PipelineConfig cfg = pattern_config();
  UnifiedRecord rec = dns_record();
  ParsedEvent ev;
  std::vector<std::string> tmpl = {"query", "<DOMAIN>"};
  auto a = extract_triples(rec, ev, tmpl, {}, cfg);
  auto b = extract_triples(rec, ev, tmpl, {}, cfg);
  CHECK(a == b);
}

TEST_CASE("explain mode names the producing pattern") {
  PipelineConfig cfg = pattern_config();
  UnifiedRecord rec = dns_record();
  ParsedEvent ev;
  std::vector<std::string> tmpl = {"query", "<DOMAIN>"};
  std::vector<std::string> why;
  extract_triples(rec, ev, tmpl, {}, cfg, LogCategory::General, &why);
  REQUIRE_FALSE(why.empty());
  CHECK(why[0].find("pattern#0") != std::string::npos);
}
