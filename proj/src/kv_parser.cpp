#include <cctype>

#include "causelog/parsers.hpp"

namespace causelog {

namespace {

bool is_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

// msg=audit(EPOCH.FRAC:SERIAL) → (_ts, _serial)
bool parse_audit_envelope(std::string_view value, std::string& ts, std::string& serial) {
  if (!value.starts_with("audit(") || !value.ends_with(")")) return false;
  std::string_view inner = value.substr(6, value.size() - 7);
  std::size_t colon = inner.find(':');
  if (colon == std::string_view::npos) return false;
  std::string_view stamp = inner.substr(0, colon);
  std::string_view ser = inner.substr(colon + 1);
  if (stamp.empty() || ser.empty()) return false;
  bool dot = false;
  for (char c : stamp) {
    if (c == '.' && !dot) {
      dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  for (char c : ser)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  ts = std::string(stamp);
  serial = std::string(ser);
  return true;
}

}  // namespace

std::map<std::string, std::string> parse_kv(std::string_view line) {
  std::map<std::string, std::string> out;
  std::string free_text;

  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;

    // key candidate
    std::size_t key_begin = i;
    while (i < line.size() && is_key_char(line[i])) ++i;
    bool is_pair = i > key_begin && i < line.size() && line[i] == '=';

    if (!is_pair) {
      // consume the rest of the token as free text
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (!free_text.empty()) free_text += ' ';
      free_text.append(line.substr(key_begin, i - key_begin));
      continue;
    }

    std::string key(line.substr(key_begin, i - key_begin));
    ++i;  // '='
    std::string value;
    if (i < line.size() && (line[i] == '"' || line[i] == '\'')) {
      char quote = line[i++];
      std::size_t close = line.find(quote, i);
      if (close == std::string_view::npos) {
        value = std::string(line.substr(i));
        i = line.size();
      } else {
        value = std::string(line.substr(i, close - i));
        i = close + 1;
      }
    } else {
      std::size_t begin = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      value = std::string(line.substr(begin, i - begin));
    }

    if (key == "msg") {
      std::string ts, serial;
      if (parse_audit_envelope(value, ts, serial)) {
        out["_ts"] = std::move(ts);
        out["_serial"] = std::move(serial);
        continue;
      }
    }
    out[key] = std::move(value);
  }

  if (!free_text.empty()) out["_free"] = std::move(free_text);
  return out;
}

}  // namespace causelog
