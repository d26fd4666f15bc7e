#include "causelog/types.hpp"

#include <charconv>

#include "causelog/strutil.hpp"

namespace causelog {

std::string_view to_string(LogCategory cat) {
  switch (cat) {
    case LogCategory::General: return "general";
    case LogCategory::KeyValue: return "keyvalue";
    case LogCategory::Request: return "request";
  }
  return "general";
}

std::optional<LogCategory> category_from_string(std::string_view s) {
  std::string lower = to_lower(s);
  if (lower == "general") return LogCategory::General;
  if (lower == "keyvalue" || lower == "key-value" || lower == "kv")
    return LogCategory::KeyValue;
  if (lower == "request") return LogCategory::Request;
  return std::nullopt;
}

std::optional<Column> column_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kSchemaColumns.size(); ++i)
    if (kSchemaColumns[i] == name) return static_cast<Column>(i);
  return std::nullopt;
}

std::string_view column_name(Column col) {
  return kSchemaColumns[static_cast<std::size_t>(col)];
}

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::In: return "in";
    case Direction::Out: return "out";
    case Direction::Internal: return "internal";
    case Direction::Unknown: return "unknown";
  }
  return "unknown";
}

std::string field_text(const UnifiedRecord& rec, Column col) {
  switch (col) {
    case Column::Time: return format_time(rec.time);
    case Column::SrcIp: return rec.src_ip;
    case Column::DestIp: return rec.dest_ip;
    case Column::Proto: return rec.proto;
    case Column::Domain: return rec.domain;
    case Column::Parameters: return rec.parameters;
    case Column::Iocs: return join(rec.iocs, ";");
    case Column::Pid: return rec.pid;
    case Column::Actions: return rec.actions;
    case Column::Status: return rec.status;
    case Column::Direction: return std::string(to_string(rec.direction));
  }
  return {};
}

std::string format_time(double t) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), t, std::chars_format::fixed);
  return std::string(buf, res.ptr);
}

}  // namespace causelog
