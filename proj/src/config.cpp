#include "causelog/config.hpp"

#include <charconv>
#include <filesystem>

#include "causelog/strutil.hpp"

namespace causelog {

namespace {

Selector parse_one_selector(std::string_view part, std::string_view context) {
  auto fail = [&](const std::string& what) -> Selector {
    throw MalformedConfigError(std::string(context), what + " in selector '" + std::string(part) + "'");
  };
  Selector sel;
  if (part == "raw") {
    sel.kind = Selector::Kind::Raw;
    return sel;
  }
  if (part == "verb") {
    sel.kind = Selector::Kind::Verb;
    return sel;
  }
  std::size_t colon = part.find(':');
  if (colon == std::string_view::npos) return fail("unknown selector");
  std::string_view head = part.substr(0, colon);
  std::string_view rest = part.substr(colon + 1);
  if (head == "kv") {
    if (rest.empty()) return fail("empty key");
    sel.kind = Selector::Kind::Kv;
    sel.name = std::string(rest);
    return sel;
  }
  if (head == "const") {
    sel.kind = Selector::Kind::Const;
    sel.text = std::string(rest);
    return sel;
  }
  if (head == "col") {
    if (!column_from_name(rest)) return fail("unknown column '" + std::string(rest) + "'");
    sel.kind = Selector::Kind::Col;
    sel.name = std::string(rest);
    return sel;
  }
  if (head == "param") {
    int idx = -1;
    auto r = std::from_chars(rest.data(), rest.data() + rest.size(), idx);
    if (r.ec != std::errc{} || r.ptr != rest.data() + rest.size() || idx < 0)
      return fail("bad param index");
    sel.kind = Selector::Kind::Param;
    sel.index = idx;
    return sel;
  }
  if (head == "entity") {
    std::size_t second = rest.find(':');
    std::string_view name = second == std::string_view::npos ? rest : rest.substr(0, second);
    if (name.empty()) return fail("empty entity type");
    int idx = 0;
    if (second != std::string_view::npos) {
      std::string_view num = rest.substr(second + 1);
      auto r = std::from_chars(num.data(), num.data() + num.size(), idx);
      if (r.ec != std::errc{} || r.ptr != num.data() + num.size() || idx < 0)
        return fail("bad entity index");
    }
    sel.kind = Selector::Kind::Entity;
    sel.name = std::string(name);
    sel.index = idx;
    return sel;
  }
  return fail("unknown selector kind '" + std::string(head) + "'");
}

std::string require_string(const toml::Table& t, std::string_view key, std::string_view context) {
  const toml::Value* v = t.find_value(key);
  if (!v || !v->is_string())
    throw MalformedConfigError(std::string(context), "missing or non-string key '" + std::string(key) + "'");
  return v->as_string();
}

std::vector<std::string> string_array(const toml::Value& v, std::string_view context) {
  if (!v.is_array())
    throw MalformedConfigError(std::string(context), "expected an array of strings");
  std::vector<std::string> out;
  for (const toml::Value& el : v.as_array()) {
    if (!el.is_string())
      throw MalformedConfigError(std::string(context), "expected an array of strings");
    out.push_back(el.as_string());
  }
  return out;
}

}  // namespace

SelectorChain parse_selector_chain(std::string_view spec, std::string_view context) {
  SelectorChain chain;
  chain.spec = std::string(spec);
  if (trim_view(spec).empty())
    throw MalformedConfigError(std::string(context), "empty selector");
  for (const std::string& part : split(spec, '|')) {
    std::string_view p = trim_view(part);
    if (p.empty())
      throw MalformedConfigError(std::string(context), "empty selector alternative");
    chain.alts.push_back(parse_one_selector(p, context));
  }
  return chain;
}

void PipelineConfig::compile() {
  compiled_entities.clear();
  compiled_iocs.clear();
  compiled_poi.clear();
  compiled_patterns.clear();

  if (category_map.empty())
    throw MalformedConfigError("categories", "at least one filename pattern is required");
  for (const auto& [pattern, cat] : category_map) {
    (void)cat;
    if (pattern.empty())
      throw MalformedConfigError("categories", "empty filename pattern");
  }

  bool has_ip4 = false, has_domain = false;
  for (const auto& [name, pattern] : entity_patterns) {
    if (name.empty())
      throw MalformedConfigError("entities", "empty entity name");
    if (name == "ip4") has_ip4 = true;
    if (name == "domain") has_domain = true;
    try {
      compiled_entities.emplace_back(name, std::regex(pattern, std::regex::ECMAScript | std::regex::optimize));
    } catch (const std::regex_error& e) {
      throw InvalidRegexError(pattern, e.what());
    }
  }
  if (!has_ip4) throw MalformedConfigError("entities.ip4", "required entity regex is missing");
  if (!has_domain) throw MalformedConfigError("entities.domain", "required entity regex is missing");

  for (std::size_t i = 0; i < ioc_rules.size(); ++i) {
    const IocRule& rule = ioc_rules[i];
    std::string context = "ioc_rules[" + std::to_string(i) + "]";
    auto col = column_from_name(rule.field);
    if (!col)
      throw MalformedConfigError(context + ".field",
                                 "'" + rule.field + "' is not a schema column");
    if (rule.label.empty())
      throw MalformedConfigError(context + ".label", "empty label");
    std::size_t colon = rule.matcher.find(':');
    if (colon == std::string::npos)
      throw MalformedConfigError(context + ".match", "expected KIND:ARG, got '" + rule.matcher + "'");
    std::string kind = rule.matcher.substr(0, colon);
    std::string arg = rule.matcher.substr(colon + 1);
    CompiledIocRule c;
    c.field = *col;
    c.arg = arg;
    c.label = rule.label;
    if (kind == "equals") {
      c.kind = CompiledIocRule::Kind::Equals;
    } else if (kind == "contains") {
      c.kind = CompiledIocRule::Kind::Contains;
    } else if (kind == "prefix") {
      c.kind = CompiledIocRule::Kind::Prefix;
    } else if (kind == "regex") {
      c.kind = CompiledIocRule::Kind::Regex;
      try {
        c.re = std::regex(arg, std::regex::ECMAScript | std::regex::optimize);
      } catch (const std::regex_error& e) {
        throw InvalidRegexError(arg, e.what());
      }
    } else {
      throw MalformedConfigError(context + ".match", "unknown matcher kind '" + kind + "'");
    }
    compiled_iocs.push_back(std::move(c));
  }

  for (const auto& [cat, mapping] : poi_maps) {
    auto& compiled = compiled_poi[cat];
    for (const auto& [colname, spec] : mapping) {
      std::string context = "poi." + std::string(to_string(cat)) + "." + colname;
      auto col = column_from_name(colname);
      if (!col)
        throw MalformedConfigError(context, "'" + colname + "' is not a schema column");
      if (*col == Column::Iocs || *col == Column::Direction)
        throw MalformedConfigError(context, "column is computed and cannot be mapped");
      SelectorChain chain = parse_selector_chain(spec, context);
      for (const Selector& s : chain.alts) {
        if (s.kind == Selector::Kind::Col)
          throw MalformedConfigError(context, "col: selectors are not allowed in poi maps");
        if (s.kind == Selector::Kind::Entity && !entity_regex(s.name))
          throw MalformedConfigError(context, "unknown entity type '" + s.name + "'");
      }
      compiled.emplace_back(*col, std::move(chain));
    }
  }

  for (const auto& [cat, patterns] : dep_patterns) {
    auto& compiled = compiled_patterns[cat];
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      const DepPatternCfg& p = patterns[i];
      std::string context = "patterns." + std::string(to_string(cat)) + "[" + std::to_string(i) + "]";
      if (p.action.empty())
        throw MalformedConfigError(context + ".action", "empty action matcher");
      if (trim(p.subject) == trim(p.object))
        throw MalformedConfigError(context, "subject and object sources must differ");
      CompiledDepPattern c;
      c.action = to_lower(p.action);
      c.subject = parse_selector_chain(p.subject, context + ".subject");
      c.object = parse_selector_chain(p.object, context + ".object");
      for (const SelectorChain* chain : {&c.subject, &c.object}) {
        for (const Selector& s : chain->alts) {
          if (s.kind == Selector::Kind::Raw || s.kind == Selector::Kind::Verb)
            throw MalformedConfigError(context, "selector '" + chain->spec + "' is not valid in patterns");
          if (s.kind == Selector::Kind::Entity && !entity_regex(s.name))
            throw MalformedConfigError(context, "unknown entity type '" + s.name + "'");
        }
      }
      if (!p.guard.empty()) {
        std::size_t eq = p.guard.find('=');
        if (eq == std::string::npos)
          throw MalformedConfigError(context + ".guard", "expected Column=value");
        auto col = column_from_name(p.guard.substr(0, eq));
        if (!col)
          throw MalformedConfigError(context + ".guard",
                                     "'" + p.guard.substr(0, eq) + "' is not a schema column");
        c.guard = std::make_pair(*col, p.guard.substr(eq + 1));
      }
      compiled.push_back(std::move(c));
    }
  }

  for (const std::string& prefix : internal_prefixes)
    if (prefix.empty())
      throw MalformedConfigError("internal_prefixes", "empty prefix");
  if (default_avg_len <= 0.0)
    throw MalformedConfigError("default_avg_len", "must be positive");
  for (double c : default_candidates)
    if (c < 0.0)
      throw MalformedConfigError("default_candidates", "candidates must be non-negative");
  if (workers < 0)
    throw MalformedConfigError("workers", "must be non-negative");
}

const std::regex* PipelineConfig::entity_regex(std::string_view name) const {
  for (const auto& [n, re] : compiled_entities)
    if (n == name) return &re;
  return nullptr;
}

bool operator==(const PipelineConfig& a, const PipelineConfig& b) {
  return a.category_map == b.category_map && a.entity_patterns == b.entity_patterns &&
         a.ioc_rules == b.ioc_rules && a.poi_maps == b.poi_maps &&
         a.dep_patterns == b.dep_patterns && a.action_lexicon == b.action_lexicon &&
         a.internal_prefixes == b.internal_prefixes && a.default_year == b.default_year &&
         a.default_avg_len == b.default_avg_len &&
         a.default_candidates == b.default_candidates && a.workers == b.workers;
}

PipelineConfig config_from_toml(const toml::Table& t) {
  PipelineConfig cfg;

  const toml::Table* categories = t.find_table("categories");
  if (!categories)
    throw MalformedConfigError("categories", "missing table");
  for (const auto& [pattern, v] : categories->values) {
    if (!v.is_string())
      throw MalformedConfigError("categories." + pattern, "category must be a string");
    auto cat = category_from_string(v.as_string());
    if (!cat)
      throw MalformedConfigError("categories." + pattern,
                                 "unknown category '" + v.as_string() + "'");
    cfg.category_map.emplace_back(pattern, *cat);
  }

  const toml::Table* entities = t.find_table("entities");
  if (!entities)
    throw MalformedConfigError("entities", "missing table");
  for (const auto& [name, v] : entities->values) {
    if (!v.is_string())
      throw MalformedConfigError("entities." + name, "pattern must be a string");
    cfg.entity_patterns.emplace_back(name, v.as_string());
  }

  if (const auto* rules = t.find_table_array("ioc_rules")) {
    for (std::size_t i = 0; i < rules->size(); ++i) {
      std::string context = "ioc_rules[" + std::to_string(i) + "]";
      IocRule rule;
      rule.field = require_string((*rules)[i], "field", context);
      rule.matcher = require_string((*rules)[i], "match", context);
      rule.label = require_string((*rules)[i], "label", context);
      cfg.ioc_rules.push_back(std::move(rule));
    }
  }

  if (const toml::Table* poi = t.find_table("poi")) {
    for (const auto& [catname, sub] : poi->tables) {
      auto cat = category_from_string(catname);
      if (!cat)
        throw MalformedConfigError("poi." + catname, "unknown category");
      auto& mapping = cfg.poi_maps[*cat];
      for (const auto& [colname, v] : sub.values) {
        if (!v.is_string())
          throw MalformedConfigError("poi." + catname + "." + colname, "selector must be a string");
        mapping.emplace_back(colname, v.as_string());
      }
    }
  }

  if (const toml::Table* patterns = t.find_table("patterns")) {
    for (const auto& [catname, arr] : patterns->table_arrays) {
      auto cat = category_from_string(catname);
      if (!cat)
        throw MalformedConfigError("patterns." + catname, "unknown category");
      auto& list = cfg.dep_patterns[*cat];
      for (std::size_t i = 0; i < arr.size(); ++i) {
        std::string context = "patterns." + catname + "[" + std::to_string(i) + "]";
        DepPatternCfg p;
        p.action = require_string(arr[i], "action", context);
        p.subject = require_string(arr[i], "subject", context);
        p.object = require_string(arr[i], "object", context);
        if (const toml::Value* g = arr[i].find_value("guard")) {
          if (!g->is_string())
            throw MalformedConfigError(context + ".guard", "guard must be a string");
          p.guard = g->as_string();
        }
        list.push_back(std::move(p));
      }
    }
  }

  if (const toml::Table* lex = t.find_table("lexicon")) {
    if (const toml::Value* v = lex->find_value("actions"))
      cfg.action_lexicon = string_array(*v, "lexicon.actions");
  }
  if (const toml::Value* v = t.find_value("internal_prefixes"))
    cfg.internal_prefixes = string_array(*v, "internal_prefixes");
  if (const toml::Value* v = t.find_value("default_year")) {
    if (!v->is_int())
      throw MalformedConfigError("default_year", "must be an integer");
    cfg.default_year = static_cast<int>(v->as_int());
  }
  if (const toml::Value* v = t.find_value("default_avg_len")) {
    if (!v->is_int() && !v->is_double())
      throw MalformedConfigError("default_avg_len", "must be a number");
    cfg.default_avg_len = v->as_double();
  }
  if (const toml::Value* v = t.find_value("default_candidates")) {
    if (!v->is_array())
      throw MalformedConfigError("default_candidates", "must be an array of numbers");
    for (const toml::Value& el : v->as_array()) {
      if (!el.is_int() && !el.is_double())
        throw MalformedConfigError("default_candidates", "must be an array of numbers");
      cfg.default_candidates.push_back(el.as_double());
    }
  }
  if (const toml::Value* v = t.find_value("workers")) {
    if (!v->is_int())
      throw MalformedConfigError("workers", "must be an integer");
    cfg.workers = static_cast<int>(v->as_int());
  }

  cfg.compile();
  return cfg;
}

toml::Table config_to_toml(const PipelineConfig& cfg) {
  toml::Table t;
  t.set("default_year", cfg.default_year);
  t.set("default_avg_len", cfg.default_avg_len);
  {
    toml::Array arr;
    for (double c : cfg.default_candidates) arr.emplace_back(c);
    t.set("default_candidates", std::move(arr));
  }
  t.set("workers", cfg.workers);
  {
    toml::Array arr;
    for (const std::string& p : cfg.internal_prefixes) arr.emplace_back(p);
    t.set("internal_prefixes", std::move(arr));
  }

  toml::Table& categories = t.subtable("categories");
  for (const auto& [pattern, cat] : cfg.category_map)
    categories.set(pattern, std::string(to_string(cat)));

  toml::Table& entities = t.subtable("entities");
  for (const auto& [name, pattern] : cfg.entity_patterns) entities.set(name, pattern);

  toml::Table& lexicon = t.subtable("lexicon");
  {
    toml::Array arr;
    for (const std::string& a : cfg.action_lexicon) arr.emplace_back(a);
    lexicon.set("actions", std::move(arr));
  }

  if (!cfg.poi_maps.empty()) {
    toml::Table& poi = t.subtable("poi");
    for (const auto& [cat, mapping] : cfg.poi_maps) {
      toml::Table& sub = poi.subtable(std::string(to_string(cat)));
      for (const auto& [col, spec] : mapping) sub.set(col, spec);
    }
  }

  if (!cfg.ioc_rules.empty()) {
    auto& arr = t.table_array("ioc_rules");
    for (const IocRule& rule : cfg.ioc_rules) {
      toml::Table el;
      el.set("field", rule.field);
      el.set("match", rule.matcher);
      el.set("label", rule.label);
      arr.push_back(std::move(el));
    }
  }

  if (!cfg.dep_patterns.empty()) {
    toml::Table& patterns = t.subtable("patterns");
    for (const auto& [cat, list] : cfg.dep_patterns) {
      auto& arr = patterns.table_array(std::string(to_string(cat)));
      for (const DepPatternCfg& p : list) {
        toml::Table el;
        el.set("action", p.action);
        el.set("subject", p.subject);
        el.set("object", p.object);
        if (!p.guard.empty()) el.set("guard", p.guard);
        arr.push_back(std::move(el));
      }
    }
  }
  return t;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec) || ec)
    throw MissingFileError("config file not found: " + path.string());
  return config_from_toml(toml::parse_file(path));
}

void save_config(const PipelineConfig& cfg, const std::filesystem::path& path) {
  toml::write_file(config_to_toml(cfg), path);
}

LogCategory classify_log(std::string_view filename, const PipelineConfig& cfg) {
  std::string base = std::filesystem::path(filename).filename().string();
  if (base.empty()) base = std::string(filename);
  for (const auto& [pattern, cat] : cfg.category_map)
    if (glob_match(pattern, base)) return cat;
  throw UnknownLogTypeError("no category pattern matches '" + base + "'");
}

}  // namespace causelog
