#include <doctest.h>

#include <string>
#include <vector>

#include "causelog/config.hpp"
#include "causelog/errors.hpp"
#include "causelog/parsers.hpp"
#include "causelog/strutil.hpp"
#include "causelog/unify.hpp"

using namespace causelog;

namespace {

PipelineConfig full_config() {
  return config_from_toml(toml::parse(R"cfg(
default_year = 2020
internal_prefixes = ["10.", "192.168."]

[categories]
"dns*" = "general"
"audit*" = "keyvalue"
"access*" = "request"

[entities]
ip4 = '(?:\d{1,3}\.){3}\d{1,3}'
domain = '\b(?:[A-Za-z0-9-]+\.)+[A-Za-z]{2,}\b'

[lexicon]
actions = ["query", "reply", "opened"]

[poi.general]
Time = "raw"
Src_IP = "entity:ip4:0"
Dest_IP = "entity:ip4:1"
Domain = "entity:domain:0"
Actions = "verb"

[poi.keyvalue]
Time = "kv:_ts"
PID = "kv:pid"
Actions = "kv:type"
Status = "kv:res|kv:success"
Parameters = "kv:exe"

[poi.request]
Time = "raw"
Src_IP = "kv:client"
Domain = "kv:path"
Parameters = "kv:query"
Status = "kv:status"
Actions = "kv:method"

[[ioc_rules]]
field = "Src_IP"
match = "equals:10.0.0.66"
label = "scanner"

[[ioc_rules]]
field = "Domain"
match = "contains:evil"
label = "malicious-domain"

[[ioc_rules]]
field = "Src_IP"
match = "prefix:10.0.0.6"
label = "watchlist"
)cfg"));
}

}  // namespace

TEST_CASE("audit events project onto pid/actions/time") {
  PipelineConfig cfg = full_config();
  ParsedEvent ev;
  ev.kv = parse_kv(R"(type=SYSCALL msg=audit(1577836800.123:456) pid=123 exe="/usr/bin/sshd")");
  ev.raw_time = ev.kv["_ts"];

  UnifiedRecord rec = to_unified(ev, {}, {}, LogCategory::KeyValue, cfg, "audit");
  CHECK(rec.time == doctest::Approx(1577836800.123).epsilon(1e-12));
  CHECK(rec.pid == "123");
  CHECK(rec.actions == "SYSCALL");
  CHECK(rec.parameters == "/usr/bin/sshd");
  CHECK(rec.src_ip == "");
  CHECK(rec.source == "audit");
}

TEST_CASE("access events project onto src/params/status/actions/domain") {
  PipelineConfig cfg = full_config();
  auto ev = parse_request(
      R"(10.0.0.5 - - [01/Jan/2020:00:00:00 +0000] "GET /index.php?id=1 HTTP/1.1" 200 512 "-" "curl/7.68")");
  REQUIRE(ev.has_value());

  UnifiedRecord rec = to_unified(*ev, {}, {}, LogCategory::Request, cfg, "access");
  CHECK(rec.time == 1577836800.0);
  CHECK(rec.src_ip == "10.0.0.5");
  CHECK(rec.parameters == "id=1");
  CHECK(rec.status == "200");
  CHECK(rec.actions == "GET");
  CHECK(rec.domain == "/index.php");
}

TEST_CASE("general events take entities from extractions and the template verb") {
  PipelineConfig cfg = full_config();
  MaskResult m = mask_entities("query evil.com from 10.0.0.2",
                               cfg.compiled_entities);
  std::vector<std::string> template_tokens = split_ws(m.masked);
  ParsedEvent ev;
  ev.raw_time = "Jan  1 00:00:00";

  UnifiedRecord rec =
      to_unified(ev, template_tokens, m.entities, LogCategory::General, cfg, "dns");
  CHECK(rec.time == 1577836800.0);
  CHECK(rec.src_ip == "10.0.0.2");
  CHECK(rec.domain == "evil.com");
  CHECK(rec.actions == "query");
  CHECK(rec.dest_ip == "");
}

TEST_CASE("records without any timestamp are rejected") {
  PipelineConfig cfg = full_config();
  ParsedEvent ev;
  ev.kv["type"] = "SYSCALL";
  CHECK_THROWS_AS(to_unified(ev, {}, {}, LogCategory::KeyValue, cfg, "audit"),
                  MissingTimeError);
}

TEST_CASE("tag_iocs appends matching labels in config order") {
  PipelineConfig cfg = full_config();
  UnifiedRecord rec;
  rec.src_ip = "10.0.0.66";
  rec.domain = "evil.example.com";

  UnifiedRecord tagged = tag_iocs(rec, cfg);
  CHECK(tagged.iocs == std::vector<std::string>{"scanner", "malicious-domain", "watchlist"});

  SUBCASE("idempotent") {
    UnifiedRecord twice = tag_iocs(tagged, cfg);
    CHECK(twice == tagged);
  }
}

TEST_CASE("tag_iocs leaves non-matching records unchanged") {
  PipelineConfig cfg = full_config();
  UnifiedRecord rec;
  rec.src_ip = "172.16.0.9";
  UnifiedRecord tagged = tag_iocs(rec, cfg);
  CHECK(tagged == rec);
}

TEST_CASE("direction heuristic follows the configured prefixes") {
  PipelineConfig cfg = full_config();
  CHECK(direction_for(cfg, "10.0.0.1", "8.8.8.8") == Direction::Out);
  CHECK(direction_for(cfg, "8.8.8.8", "192.168.1.2") == Direction::In);
  CHECK(direction_for(cfg, "10.0.0.1", "10.0.0.2") == Direction::Internal);
  CHECK(direction_for(cfg, "8.8.8.8", "9.9.9.9") == Direction::Unknown);
  CHECK(direction_for(cfg, "", "") == Direction::Unknown);
  // literal rule: an internal src with an empty dest counts as outbound
  CHECK(direction_for(cfg, "10.0.0.1", "") == Direction::Out);
}

TEST_CASE("csv output carries exactly the 11 schema columns plus Source") {
  CHECK(unified_csv_header() ==
        "Time,Src_IP,Dest_IP,Proto,Domain,Parameters,IOCs,PID,Actions,Status,Direction,Source");

  UnifiedRecord rec;
  rec.time = 1577836800.0;
  rec.src_ip = "10.0.0.5";
  rec.iocs = {"a", "b"};
  rec.direction = Direction::Out;
  rec.source = "dns";
  std::string row = unified_csv_row(rec);
  auto fields = parse_csv_row(row);
  REQUIRE(fields.size() == 12);
  CHECK(fields[0] == "1577836800");
  CHECK(fields[1] == "10.0.0.5");
  CHECK(fields[2] == "");  // empty columns stay empty, no sentinel
  CHECK(fields[6] == "a;b");
  CHECK(fields[10] == "out");
  CHECK(fields[11] == "dns");
}

TEST_CASE("csv escaping round-trips embedded commas and quotes") {
  UnifiedRecord rec;
  rec.time = 1.0;
  rec.parameters = R"(a=1,b="x y")";
  rec.domain = "multi\nline";
  rec.source = "s";
  auto fields = parse_csv_row(unified_csv_row(rec));
  REQUIRE(fields.size() == 12);
  CHECK(fields[5] == R"(a=1,b="x y")");
  CHECK(fields[4] == "multi\nline");
}

TEST_CASE("every filled column traces back to a parser output") {
  PipelineConfig cfg = full_config();
  ParsedEvent ev;
  ev.kv = parse_kv(R"(type=USER_LOGIN msg=audit(1600000000.5:9) pid=77 res=failed)");
  ev.raw_time = ev.kv["_ts"];
  UnifiedRecord rec = to_unified(ev, {}, {}, LogCategory::KeyValue, cfg, "audit");

  // the record never invents values: each non-empty column equals a kv field
  CHECK(rec.pid == ev.kv["pid"]);
  CHECK(rec.actions == ev.kv["type"]);
  CHECK(rec.status == ev.kv["res"]);
  CHECK(rec.domain.empty());
  CHECK(rec.src_ip.empty());
  CHECK(rec.parameters.empty());
}

TEST_CASE("selector alternation picks the first non-empty source") {
  PipelineConfig cfg = full_config();
  ParsedEvent ev;
  ev.kv = parse_kv("type=CRED msg=audit(1600000000.0:1) pid=5 success=yes");
  ev.raw_time = ev.kv["_ts"];
  UnifiedRecord rec = to_unified(ev, {}, {}, LogCategory::KeyValue, cfg, "audit");
  CHECK(rec.status == "yes");  // res absent, success used
}

TEST_CASE("first_lexicon_verb matches prefixes up to a non-alphanumeric") {
  std::vector<std::string> lexicon = {"query", "reply"};
  std::vector<std::string> t1 = {"dnsmasq[101]:", "query[A]", "<DOMAIN>"};
  CHECK(first_lexicon_verb(t1, lexicon) == "query");
  std::vector<std::string> t2 = {"queryx", "other"};
  CHECK(first_lexicon_verb(t2, lexicon) == "");
  std::vector<std::string> t3 = {"REPLY", "query"};
  CHECK(first_lexicon_verb(t3, lexicon) == "reply");
}
