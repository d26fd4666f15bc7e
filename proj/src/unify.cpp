#include "causelog/unify.hpp"

#include <cctype>

#include "causelog/errors.hpp"
#include "causelog/strutil.hpp"
#include "causelog/timeparse.hpp"

namespace causelog {

namespace {

bool token_matches_verb(std::string_view token, std::string_view verb) {
  if (token.size() < verb.size()) return false;
  for (std::size_t i = 0; i < verb.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(token[i])) !=
        std::tolower(static_cast<unsigned char>(verb[i])))
      return false;
  }
  if (token.size() == verb.size()) return true;
  char next = token[verb.size()];
  return !std::isalnum(static_cast<unsigned char>(next));
}

std::string resolve_selector(const Selector& sel, const ParsedEvent& ev,
                             std::span<const std::string> template_tokens,
                             std::span<const Extraction> entities,
                             const PipelineConfig& cfg) {
  switch (sel.kind) {
    case Selector::Kind::Raw:
      return ev.raw_time;
    case Selector::Kind::Kv: {
      auto it = ev.kv.find(sel.name);
      return it == ev.kv.end() ? std::string() : it->second;
    }
    case Selector::Kind::Param:
      return sel.index < static_cast<int>(ev.params.size())
                 ? ev.params[static_cast<std::size_t>(sel.index)]
                 : std::string();
    case Selector::Kind::Entity: {
      int seen = 0;
      for (const Extraction& e : entities) {
        if (e.type != sel.name) continue;
        if (seen == sel.index) return e.value;
        ++seen;
      }
      return {};
    }
    case Selector::Kind::Verb:
      return first_lexicon_verb(template_tokens, cfg.action_lexicon);
    case Selector::Kind::Const:
      return sel.text;
    case Selector::Kind::Col:
      return {};  // not valid outside dependency patterns
  }
  return {};
}

void csv_escape_into(std::string& out, std::string_view field) {
  bool needs_quotes = field.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quotes) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

}  // namespace

std::string first_lexicon_verb(std::span<const std::string> tokens,
                               std::span<const std::string> lexicon) {
  for (const std::string& token : tokens) {
    for (const std::string& verb : lexicon) {
      if (!verb.empty() && token_matches_verb(token, verb)) return verb;
    }
  }
  return {};
}

std::string resolve_chain(const SelectorChain& chain, const ParsedEvent& ev,
                          std::span<const std::string> template_tokens,
                          std::span<const Extraction> entities,
                          const PipelineConfig& cfg) {
  for (const Selector& sel : chain.alts) {
    std::string value = resolve_selector(sel, ev, template_tokens, entities, cfg);
    if (!value.empty()) return value;
  }
  return {};
}

Direction direction_for(const PipelineConfig& cfg, std::string_view src_ip,
                        std::string_view dest_ip) {
  auto internal = [&](std::string_view ip) {
    for (const std::string& prefix : cfg.internal_prefixes)
      if (ip.starts_with(prefix)) return true;
    return false;
  };
  bool src_internal = internal(src_ip);
  bool dest_internal = internal(dest_ip);
  if (src_internal && dest_internal) return Direction::Internal;
  if (src_internal) return Direction::Out;
  if (dest_internal) return Direction::In;
  return Direction::Unknown;
}

UnifiedRecord to_unified(const ParsedEvent& event,
                         std::span<const std::string> template_tokens,
                         std::span<const Extraction> entities,
                         LogCategory category, const PipelineConfig& cfg,
                         std::string_view source) {
  UnifiedRecord rec;
  rec.source = std::string(source);

  auto poi = cfg.compiled_poi.find(category);
  std::string time_text;
  if (poi != cfg.compiled_poi.end()) {
    for (const auto& [col, chain] : poi->second) {
      std::string value = resolve_chain(chain, event, template_tokens, entities, cfg);
      switch (col) {
        case Column::Time: time_text = std::move(value); break;
        case Column::SrcIp: rec.src_ip = std::move(value); break;
        case Column::DestIp: rec.dest_ip = std::move(value); break;
        case Column::Proto: rec.proto = std::move(value); break;
        case Column::Domain: rec.domain = std::move(value); break;
        case Column::Parameters: rec.parameters = std::move(value); break;
        case Column::Pid: rec.pid = std::move(value); break;
        case Column::Actions: rec.actions = std::move(value); break;
        case Column::Status: rec.status = std::move(value); break;
        case Column::Iocs:
        case Column::Direction:
          break;  // unreachable, rejected at config compile
      }
    }
  }

  if (time_text.empty() && !event.raw_time.empty()) time_text = event.raw_time;
  if (time_text.empty())
    throw MissingTimeError("no timestamp derivable for record from " + rec.source);
  rec.time = parse_timestamp(time_text, cfg.default_year);
  rec.direction = direction_for(cfg, rec.src_ip, rec.dest_ip);
  return rec;
}

UnifiedRecord tag_iocs(UnifiedRecord record, const PipelineConfig& cfg) {
  for (const CompiledIocRule& rule : cfg.compiled_iocs) {
    std::string value = field_text(record, rule.field);
    bool hit = false;
    switch (rule.kind) {
      case CompiledIocRule::Kind::Equals: hit = value == rule.arg; break;
      case CompiledIocRule::Kind::Contains:
        hit = value.find(rule.arg) != std::string::npos;
        break;
      case CompiledIocRule::Kind::Prefix: hit = value.starts_with(rule.arg); break;
      case CompiledIocRule::Kind::Regex: hit = std::regex_search(value, rule.re); break;
    }
    if (!hit) continue;
    bool present = false;
    for (const std::string& label : record.iocs)
      if (label == rule.label) {
        present = true;
        break;
      }
    if (!present) record.iocs.push_back(rule.label);
  }
  return record;
}

std::string unified_csv_header() {
  std::string out;
  for (std::size_t i = 0; i < kSchemaColumns.size(); ++i) {
    if (i) out += ',';
    out += kSchemaColumns[i];
  }
  out += ",Source";
  return out;
}

std::string unified_csv_row(const UnifiedRecord& rec) {
  std::string out;
  for (std::size_t i = 0; i < kSchemaColumns.size(); ++i) {
    if (i) out += ',';
    csv_escape_into(out, field_text(rec, static_cast<Column>(i)));
  }
  out += ',';
  csv_escape_into(out, rec.source);
  return out;
}

std::vector<std::string> parse_csv_row(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          i += 2;
          continue;
        }
        quoted = false;
        ++i;
        continue;
      }
      current += c;
      ++i;
      continue;
    }
    if (c == '"' && current.empty()) {
      quoted = true;
      ++i;
      continue;
    }
    if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
      ++i;
      continue;
    }
    current += c;
    ++i;
  }
  fields.push_back(std::move(current));
  return fields;
}

}  // namespace causelog
