#pragma once

#include <span>
#include <string>
#include <string_view>

#include "causelog/config.hpp"
#include "causelog/parsers.hpp"
#include "causelog/types.hpp"

namespace causelog {

// First lexicon verb among the tokens, in token order; "" when none.
// A token matches a verb case-insensitively, either exactly or as a prefix
// followed by a non-alphanumeric character ("query[A]" matches "query").
std::string first_lexicon_verb(std::span<const std::string> tokens,
                               std::span<const std::string> lexicon);

// First non-empty alternative of a selector chain against one event.
std::string resolve_chain(const SelectorChain& chain, const ParsedEvent& ev,
                          std::span<const std::string> template_tokens,
                          std::span<const Extraction> entities,
                          const PipelineConfig& cfg);

// Projects one parsed event onto the unified schema per cfg.poi_maps.
// template_tokens may be empty for non-General categories.
// Throws MissingTimeError / UnparseableTimestampError; both are treated as
// per-record rejects by the pipeline.
UnifiedRecord to_unified(const ParsedEvent& event,
                         std::span<const std::string> template_tokens,
                         std::span<const Extraction> entities,
                         LogCategory category, const PipelineConfig& cfg,
                         std::string_view source);

// Appends matching rule labels to iocs (deduplicated, config order).
UnifiedRecord tag_iocs(UnifiedRecord record, const PipelineConfig& cfg);

Direction direction_for(const PipelineConfig& cfg, std::string_view src_ip,
                        std::string_view dest_ip);

// CSV output: the 11 schema columns plus the Source provenance extension.
std::string unified_csv_header();
std::string unified_csv_row(const UnifiedRecord& rec);
std::vector<std::string> parse_csv_row(std::string_view line);

}  // namespace causelog
