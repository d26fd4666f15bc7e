#include <algorithm>
#include <map>
#include <stdexcept>

#include "causelog/errors.hpp"
#include "causelog/parsers.hpp"
#include "causelog/strutil.hpp"

namespace causelog {

namespace {

bool is_placeholder(std::string_view token) {
  return token.size() >= 3 && token.front() == '<' && token.back() == '>';
}

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

double similarity(const std::vector<std::string>& tmpl,
                  const std::vector<std::string>& tokens) {
  if (tmpl.size() != tokens.size()) return 0.0;
  if (tmpl.empty()) return 1.0;
  std::size_t equal = 0;
  for (std::size_t i = 0; i < tmpl.size(); ++i)
    if (tmpl[i] == tokens[i]) ++equal;
  return static_cast<double>(equal) / static_cast<double>(tmpl.size());
}

struct Node {
  std::map<std::string, Node> children;
  std::vector<int> groups;  // leaf only
};

}  // namespace

std::string TemplateGroup::text() const { return join(tokens, " "); }

std::pair<int, double> auto_params(std::span<const std::string> masked_lines) {
  if (masked_lines.empty()) throw EmptySampleError("auto_params needs at least one line");
  const std::size_t sample = std::min<std::size_t>(masked_lines.size(), 2000);

  std::map<std::size_t, std::vector<std::vector<std::string>>> buckets;
  for (std::size_t i = 0; i < sample; ++i) {
    auto toks = split_ws(masked_lines[i]);
    buckets[toks.size()].push_back(std::move(toks));
  }

  std::vector<double> fractions;
  for (const auto& [count, lines] : buckets) {
    if (count == 0) continue;
    const double n = static_cast<double>(lines.size());
    std::size_t variable = 0;
    for (std::size_t pos = 0; pos < count; ++pos) {
      std::map<std::string_view, std::size_t> freq;
      for (const auto& toks : lines) ++freq[toks[pos]];
      bool var = false;
      for (const auto& [token, occurrences] : freq) {
        if (contains_digit(token) || is_placeholder(token) ||
            static_cast<double>(occurrences) < 0.10 * n) {
          var = true;
          break;
        }
      }
      if (var) ++variable;
    }
    fractions.push_back(static_cast<double>(variable) / static_cast<double>(count));
  }

  double v = 0.0;
  if (!fractions.empty()) {
    std::sort(fractions.begin(), fractions.end());
    std::size_t mid = fractions.size() / 2;
    v = fractions.size() % 2 ? fractions[mid]
                             : (fractions[mid - 1] + fractions[mid]) / 2.0;
  }
  return {4, clamp(1.0 - v, 0.3, 0.7)};
}

MineResult parse_general(std::span<const std::string> masked_lines, int depth,
                         double sim_threshold) {
  if (depth < 3) throw std::invalid_argument("template tree depth must be >= 3");
  if (!(sim_threshold > 0.0 && sim_threshold < 1.0))
    throw std::invalid_argument("similarity threshold must be in (0, 1)");

  MineResult result;
  std::map<std::size_t, Node> roots;  // level 1: token count
  std::vector<std::vector<std::string>> all_tokens(masked_lines.size());
  std::vector<int> assignment(masked_lines.size(), -1);
  const std::size_t token_levels = static_cast<std::size_t>(depth - 2);

  for (std::size_t i = 0; i < masked_lines.size(); ++i) {
    auto tokens = split_ws(masked_lines[i]);
    Node* node = &roots[tokens.size()];
    const std::size_t levels = std::min(tokens.size(), token_levels);
    for (std::size_t l = 0; l < levels; ++l) {
      const std::string& tok = tokens[l];
      node = &node->children[contains_digit(tok) ? std::string(kWildcard) : tok];
    }

    int best = -1;
    double best_sim = -1.0;
    for (int gid : node->groups) {
      double sim = similarity(result.groups[gid].tokens, tokens);
      if (sim > best_sim) {
        best_sim = sim;
        best = gid;
      }
    }
    if (best >= 0 && best_sim >= sim_threshold) {
      TemplateGroup& g = result.groups[best];
      for (std::size_t p = 0; p < tokens.size(); ++p)
        if (g.tokens[p] != tokens[p]) g.tokens[p] = std::string(kWildcard);
      g.member_ids.push_back(i);
      assignment[i] = best;
    } else {
      int gid = static_cast<int>(result.groups.size());
      result.groups.push_back(TemplateGroup{gid, tokens, {i}});
      node->groups.push_back(gid);
      assignment[i] = gid;
    }
    all_tokens[i] = std::move(tokens);
  }

  // Parameters come from the final templates so every event matches its
  // group's wildcard slots exactly.
  result.events.resize(masked_lines.size());
  for (std::size_t i = 0; i < masked_lines.size(); ++i) {
    ParsedEvent& ev = result.events[i];
    ev.line_id = i;
    ev.template_id = assignment[i];
    const TemplateGroup& g = result.groups[assignment[i]];
    for (std::size_t p = 0; p < g.tokens.size(); ++p)
      if (g.tokens[p] == kWildcard) ev.params.push_back(all_tokens[i][p]);
  }
  return result;
}

}  // namespace causelog
