#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causelog/toml.hpp"
#include "causelog/types.hpp"

namespace causelog {

// Value source for POI column maps and dependency-pattern endpoints.
// Grammar (alternatives joined with '|', first non-empty wins):
//   raw                the line's extracted timestamp text
//   kv:KEY             key-value map entry
//   param:IDX          template parameter by index
//   entity:NAME[:IDX]  IDX-th masked-entity extraction of that type (default 0)
//   verb               first action-lexicon verb in the template
//   col:NAME           schema column of the record (patterns only)
//   const:TEXT         fixed text
struct Selector {
  enum class Kind { Raw, Kv, Param, Entity, Verb, Col, Const };
  Kind kind = Kind::Const;
  std::string name;   // Kv key / Entity type / Col column name
  int index = 0;      // Param / Entity
  std::string text;   // Const
};

struct SelectorChain {
  std::string spec;  // original text, serialized back as-is
  std::vector<Selector> alts;
};

// Throws MalformedConfigError (context = offending key) on bad syntax.
SelectorChain parse_selector_chain(std::string_view spec, std::string_view context);

struct IocRule {
  std::string field;    // one of the 11 schema columns
  std::string matcher;  // equals:X | contains:X | prefix:X | regex:R
  std::string label;

  bool operator==(const IocRule&) const = default;
};

struct DepPatternCfg {
  std::string action;   // lexicon verb to match, or "*" for any
  std::string subject;  // selector chain
  std::string object;   // selector chain
  std::string guard;    // optional "Column=value"

  bool operator==(const DepPatternCfg&) const = default;
};

struct CompiledIocRule {
  Column field = Column::Time;
  enum class Kind { Equals, Contains, Prefix, Regex } kind = Kind::Equals;
  std::string arg;
  std::regex re;
  std::string label;
};

struct CompiledDepPattern {
  std::string action;
  SelectorChain subject;
  SelectorChain object;
  std::optional<std::pair<Column, std::string>> guard;
};

struct PipelineConfig {
  // Declarative state (serialized, compared).
  std::vector<std::pair<std::string, LogCategory>> category_map;  // pattern → category, first match wins
  std::vector<std::pair<std::string, std::string>> entity_patterns;  // name → regex
  std::vector<IocRule> ioc_rules;
  std::map<LogCategory, std::vector<std::pair<std::string, std::string>>> poi_maps;  // column → selector
  std::map<LogCategory, std::vector<DepPatternCfg>> dep_patterns;
  std::vector<std::string> action_lexicon;
  std::vector<std::string> internal_prefixes;
  int default_year = 1970;
  double default_avg_len = 1.0;
  std::vector<double> default_candidates;
  int workers = 0;  // 0 = hardware concurrency

  // Compiled caches, rebuilt by compile().
  std::vector<std::pair<std::string, std::regex>> compiled_entities;
  std::vector<CompiledIocRule> compiled_iocs;
  std::map<LogCategory, std::vector<std::pair<Column, SelectorChain>>> compiled_poi;
  std::map<LogCategory, std::vector<CompiledDepPattern>> compiled_patterns;

  // Validates invariants and rebuilds the compiled caches. Throws
  // MalformedConfigError / InvalidRegexError.
  void compile();

  const std::regex* entity_regex(std::string_view name) const;
};

bool operator==(const PipelineConfig& a, const PipelineConfig& b);

PipelineConfig config_from_toml(const toml::Table& t);
toml::Table config_to_toml(const PipelineConfig& cfg);

// Throws MissingFileError, MalformedConfigError, InvalidRegexError.
PipelineConfig load_config(const std::filesystem::path& path);
void save_config(const PipelineConfig& cfg, const std::filesystem::path& path);

// Category of the first matching filename pattern, in config order.
// Matches against the basename. Throws UnknownLogTypeError.
LogCategory classify_log(std::string_view filename, const PipelineConfig& cfg);

}  // namespace causelog
