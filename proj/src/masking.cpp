#include <algorithm>
#include <cctype>

#include "causelog/parsers.hpp"
#include "causelog/strutil.hpp"

namespace causelog {

std::string entity_placeholder(std::string_view name) {
  std::string out = "<";
  for (char c : name) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  out += ">";
  return out;
}

MaskResult mask_entities(
    std::string_view line,
    std::span<const std::pair<std::string, std::regex>> entity_regexes) {
  struct Match {
    std::size_t begin, end, regex_index;
    std::string value;
  };
  std::vector<Match> matches;
  for (std::size_t ri = 0; ri < entity_regexes.size(); ++ri) {
    const std::regex& re = entity_regexes[ri].second;
    auto it = std::cregex_iterator(line.data(), line.data() + line.size(), re);
    auto end = std::cregex_iterator();
    for (; it != end; ++it) {
      const auto& m = *it;
      if (m.length(0) == 0) continue;
      matches.push_back(Match{static_cast<std::size_t>(m.position(0)),
                              static_cast<std::size_t>(m.position(0) + m.length(0)),
                              ri, m.str(0)});
    }
  }
  std::stable_sort(matches.begin(), matches.end(), [](const Match& a, const Match& b) {
    if (a.begin != b.begin) return a.begin < b.begin;
    return a.regex_index < b.regex_index;
  });

  MaskResult out;
  out.masked.reserve(line.size());
  std::size_t cursor = 0;
  for (const Match& m : matches) {
    if (m.begin < cursor) continue;  // overlap, earlier match wins
    out.masked.append(line.substr(cursor, m.begin - cursor));
    out.masked.append(entity_placeholder(entity_regexes[m.regex_index].first));
    out.entities.push_back(Extraction{entity_regexes[m.regex_index].first, m.value,
                                      m.begin, m.end});
    cursor = m.end;
  }
  out.masked.append(line.substr(cursor));
  return out;
}

}  // namespace causelog
