#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causelog/types.hpp"

namespace causelog {

// ---- entity masking --------------------------------------------------------

struct Extraction {
  std::string type;
  std::string value;
  std::size_t begin = 0;  // span in the original line
  std::size_t end = 0;

  bool operator==(const Extraction&) const = default;
};

struct MaskResult {
  std::string masked;
  std::vector<Extraction> entities;  // left-to-right
};

// Replaces every regex match with a typed placeholder <NAME> (uppercased).
// Regexes apply in the given order; overlaps resolve to the earlier start,
// then the earlier regex.
MaskResult mask_entities(
    std::string_view line,
    std::span<const std::pair<std::string, std::regex>> entity_regexes);

std::string entity_placeholder(std::string_view name);

// ---- template mining (general logs) ----------------------------------------

struct TemplateGroup {
  int id = 0;
  std::vector<std::string> tokens;  // '<*>' marks a variable slot
  std::vector<std::size_t> member_ids;

  std::size_t count() const { return member_ids.size(); }
  std::string text() const;
};

struct MineResult {
  std::vector<TemplateGroup> groups;
  std::vector<ParsedEvent> events;  // one per input line, same order
};

inline constexpr std::string_view kWildcard = "<*>";

// Depth is fixed at 4; the similarity threshold is clamp(1 - v, 0.3, 0.7)
// where v is the median per-token-count-bucket fraction of variable-like
// token positions over the first min(2000, N) lines. A position is
// variable-like when some token there contains a digit, is a placeholder,
// or occurs in fewer than 10% of the bucket's lines.
// Throws EmptySampleError.
std::pair<int, double> auto_params(std::span<const std::string> masked_lines);

// Fixed-depth template tree with wildcard routing for digit-bearing tokens.
// Requires depth >= 3 and 0 < sim_threshold < 1.
MineResult parse_general(std::span<const std::string> masked_lines, int depth,
                         double sim_threshold);

// ---- key-value logs ---------------------------------------------------------

// Whitespace-tokenized key=value extraction. Values may be bare or quoted
// (quoted values may span whitespace). msg=audit(EPOCH.FRAC:SERIAL) becomes
// _ts/_serial; non-KV tokens concatenate under _free; duplicate keys keep
// the last occurrence.
std::map<std::string, std::string> parse_kv(std::string_view line);

// ---- request logs -----------------------------------------------------------

// Combined access-log layout:
//   CLIENT - USER [TIME] "METHOD PATH?QUERY PROTO" STATUS SIZE "REFERER" "AGENT"
// kv carries client, method, path, query, status, agent.
// Returns nullopt for non-matching lines (reported, not fatal).
std::optional<ParsedEvent> parse_request(std::string_view line, std::size_t line_id = 0);

}  // namespace causelog
