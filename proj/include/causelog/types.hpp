#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace causelog {

enum class LogCategory { General, KeyValue, Request };

std::string_view to_string(LogCategory cat);
std::optional<LogCategory> category_from_string(std::string_view s);

// The unified record columns, in serialization order.
enum class Column : int {
  Time = 0,
  SrcIp,
  DestIp,
  Proto,
  Domain,
  Parameters,
  Iocs,
  Pid,
  Actions,
  Status,
  Direction,
};

inline constexpr std::array<std::string_view, 11> kSchemaColumns = {
    "Time",   "Src_IP", "Dest_IP", "Proto",  "Domain", "Parameters",
    "IOCs",   "PID",    "Actions", "Status", "Direction"};

std::optional<Column> column_from_name(std::string_view name);
std::string_view column_name(Column col);

enum class Direction { In, Out, Internal, Unknown };

std::string_view to_string(Direction d);

// One normalized log event. Empty string means the column is absent.
struct UnifiedRecord {
  double time = 0.0;
  std::string src_ip;
  std::string dest_ip;
  std::string proto;
  std::string domain;
  std::string parameters;
  std::vector<std::string> iocs;
  std::string pid;
  std::string actions;
  std::string status;
  Direction direction = Direction::Unknown;
  std::string source;  // provenance extension, not a schema column

  bool operator==(const UnifiedRecord&) const = default;
};

// Text form of one column, as used in CSV output and IOC matching.
// IOC labels are joined with ';'.
std::string field_text(const UnifiedRecord& rec, Column col);

struct EntityTriple {
  std::string subject;
  std::string action;
  std::string object;
  double time = 0.0;
  std::map<std::string, std::string> attrs;

  bool operator==(const EntityTriple&) const = default;
};

// Output of one category parser for one line.
struct ParsedEvent {
  std::size_t line_id = 0;
  int template_id = -1;                    // General category only
  std::vector<std::string> params;         // General: tokens at <*> slots
  std::map<std::string, std::string> kv;   // KeyValue / Request
  std::string raw_time;

  bool operator==(const ParsedEvent&) const = default;
};

// Shortest decimal form of an epoch-seconds value that parses back exactly.
std::string format_time(double t);

}  // namespace causelog
