#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace causelog {

// Parses one timestamp into UTC epoch seconds. Supported forms:
//   1577836800.123                      epoch seconds, fraction optional
//   Jan  1 00:00:00                     syslog, year injected from default_year
//   01/Jan/2020:00:00:00 +0000          access log, offset optional (UTC if absent)
//   2020-01-01T00:00:00.5+01:00         ISO-8601 ('T' or space, Z/±HH:MM/±HHMM)
// Throws UnparseableTimestampError otherwise.
double parse_timestamp(std::string_view raw, int default_year);

// Splits a recognized leading timestamp off a log line.
// Returns (raw stamp, remainder) or nullopt when the line has no stamp prefix.
std::optional<std::pair<std::string, std::string>> split_leading_timestamp(
    std::string_view line);

}  // namespace causelog
