#include "causelog/triples.hpp"

#include "causelog/strutil.hpp"
#include "causelog/unify.hpp"

namespace causelog {

namespace {

std::string resolve_endpoint(const SelectorChain& chain, const UnifiedRecord& rec,
                             const ParsedEvent& ev,
                             std::span<const std::string> template_tokens,
                             std::span<const Extraction> entities,
                             const PipelineConfig& cfg) {
  for (const Selector& sel : chain.alts) {
    std::string value;
    if (sel.kind == Selector::Kind::Col) {
      value = field_text(rec, *column_from_name(sel.name));
    } else {
      SelectorChain single;
      single.alts.push_back(sel);
      value = resolve_chain(single, ev, template_tokens, entities, cfg);
    }
    if (!value.empty()) return value;
  }
  return {};
}

EntityTriple make_triple(std::string subject, std::string action, std::string object,
                         const UnifiedRecord& rec) {
  EntityTriple t;
  t.subject = std::move(subject);
  t.action = std::move(action);
  t.object = std::move(object);
  t.time = rec.time;
  t.attrs = triple_attrs(rec);
  return t;
}

}  // namespace

std::map<std::string, std::string> triple_attrs(const UnifiedRecord& record) {
  std::map<std::string, std::string> attrs;
  attrs["source"] = record.source;
  if (!record.proto.empty()) attrs["proto"] = record.proto;
  if (!record.status.empty()) attrs["status"] = record.status;
  if (!record.parameters.empty()) attrs["parameters"] = record.parameters;
  if (record.direction != Direction::Unknown)
    attrs["direction"] = std::string(to_string(record.direction));
  if (!record.iocs.empty()) attrs["ioc"] = join(record.iocs, ";");
  return attrs;
}

std::vector<EntityTriple> extract_triples(const UnifiedRecord& record,
                                          const ParsedEvent& event,
                                          std::span<const std::string> template_tokens,
                                          std::span<const Extraction> entities,
                                          const PipelineConfig& cfg,
                                          LogCategory category,
                                          std::vector<std::string>* explain) {
  std::vector<EntityTriple> out;
  auto patterns = cfg.compiled_patterns.find(category);
  if (patterns == cfg.compiled_patterns.end() || patterns->second.empty()) {
    if (explain)
      explain->push_back("no dependency patterns configured for " +
                         std::string(to_string(category)) + " logs");
    return out;
  }

  std::string verb = category == LogCategory::General
                         ? first_lexicon_verb(template_tokens, cfg.action_lexicon)
                         : record.actions;
  if (verb.empty()) {
    if (explain)
      explain->push_back(category == LogCategory::General
                             ? "no lexicon verb in template"
                             : "record has no action");
    return out;
  }

  for (std::size_t i = 0; i < patterns->second.size(); ++i) {
    const CompiledDepPattern& p = patterns->second[i];
    if (p.action != "*" && !iequals(p.action, verb)) continue;
    if (p.guard && field_text(record, p.guard->first) != p.guard->second) continue;
    std::string subject =
        resolve_endpoint(p.subject, record, event, template_tokens, entities, cfg);
    std::string object =
        resolve_endpoint(p.object, record, event, template_tokens, entities, cfg);
    if (subject.empty() || object.empty()) continue;
    if (explain)
      explain->push_back("pattern#" + std::to_string(i) + " (" + p.subject.spec + " -" +
                         verb + "-> " + p.object.spec + ") => (" + subject + ", " + verb +
                         ", " + object + ")");
    out.push_back(make_triple(std::move(subject), verb, std::move(object), record));
  }
  if (out.empty() && explain) explain->push_back("no pattern matched verb '" + verb + "'");
  return out;
}

std::vector<EntityTriple> default_triples(const UnifiedRecord& record,
                                          LogCategory category,
                                          const std::map<std::string, std::string>& kv,
                                          std::vector<std::string>* explain) {
  std::vector<EntityTriple> out;
  if (category == LogCategory::Request) {
    const std::string& object = record.domain;
    if (record.src_ip.empty() || record.actions.empty() || object.empty()) {
      if (explain) explain->push_back("default request relation missing an endpoint");
      return out;
    }
    if (explain)
      explain->push_back("default request relation => (" + record.src_ip + ", " +
                         record.actions + ", " + object + ")");
    out.push_back(make_triple(record.src_ip, record.actions, object, record));
    return out;
  }
  if (category == LogCategory::KeyValue) {
    if (record.pid.empty() || record.actions.empty()) {
      if (explain) explain->push_back("default keyvalue relation missing pid or action");
      return out;
    }
    std::string object;
    for (const char* key : {"exe", "path", "address"}) {
      auto it = kv.find(key);
      if (it != kv.end() && !it->second.empty()) {
        object = it->second;
        break;
      }
    }
    if (object.empty()) {
      if (explain) explain->push_back("default keyvalue relation missing target object");
      return out;
    }
    std::string subject = "pid:" + record.pid;
    if (explain)
      explain->push_back("default keyvalue relation => (" + subject + ", " +
                         record.actions + ", " + object + ")");
    out.push_back(make_triple(std::move(subject), record.actions, std::move(object), record));
    return out;
  }
  if (explain) explain->push_back("no default relation for general logs");
  return out;
}

}  // namespace causelog
