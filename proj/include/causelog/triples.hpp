#pragma once

#include <span>
#include <string>
#include <vector>

#include "causelog/config.hpp"
#include "causelog/parsers.hpp"
#include "causelog/types.hpp"

namespace causelog {

// Pattern-driven extraction. For General-category records the first lexicon
// verb in the template is the action; for the structured categories the
// record's Actions column is. Every matching pattern of the category (config
// order) emits one triple. An empty result means no triple was extractable
// (counted by callers, never fatal).
std::vector<EntityTriple> extract_triples(const UnifiedRecord& record,
                                          const ParsedEvent& event,
                                          std::span<const std::string> template_tokens,
                                          std::span<const Extraction> entities,
                                          const PipelineConfig& cfg,
                                          LogCategory category = LogCategory::General,
                                          std::vector<std::string>* explain = nullptr);

// Default relations for the structured categories:
//   Request : (src_ip, method action, path/domain object)
//   KeyValue: (pid-qualified subject, type action, first of kv exe/path/address)
std::vector<EntityTriple> default_triples(const UnifiedRecord& record,
                                          LogCategory category,
                                          const std::map<std::string, std::string>& kv,
                                          std::vector<std::string>* explain = nullptr);

// Shared attribute projection: source always; proto/status/parameters/ioc
// when non-empty; direction when known.
std::map<std::string, std::string> triple_attrs(const UnifiedRecord& record);

}  // namespace causelog
