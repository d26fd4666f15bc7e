#include <regex>

#include "causelog/parsers.hpp"

namespace causelog {

namespace {

// CLIENT IDENT USER [TIME] "METHOD TARGET[ PROTO]" STATUS SIZE ["REFERER" "AGENT"]
const std::regex kRequestLine(
    R"re(^(\S+)\s+(\S+)\s+(\S+)\s+\[([^\]]+)\]\s+"([A-Za-z]+)\s+([^\s"]+)(?:\s+([^"]*))?"\s+(\d{3})\s+(\S+)(?:\s+"([^"]*)"\s+"([^"]*)")?\s*$)re",
    std::regex::ECMAScript | std::regex::optimize);

}  // namespace

std::optional<ParsedEvent> parse_request(std::string_view line, std::size_t line_id) {
  std::cmatch m;
  if (!std::regex_match(line.data(), line.data() + line.size(), m, kRequestLine))
    return std::nullopt;

  ParsedEvent ev;
  ev.line_id = line_id;
  ev.raw_time = m[4].str();
  ev.kv["client"] = m[1].str();
  ev.kv["method"] = m[5].str();

  std::string target = m[6].str();
  std::size_t q = target.find('?');
  if (q == std::string::npos) {
    ev.kv["path"] = target;
    ev.kv["query"] = "";
  } else {
    ev.kv["path"] = target.substr(0, q);
    ev.kv["query"] = target.substr(q + 1);
  }
  ev.kv["status"] = m[8].str();
  ev.kv["agent"] = m[11].matched ? m[11].str() : "";
  return ev;
}

}  // namespace causelog
