#include "causelog/toml.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "causelog/strutil.hpp"
#include "causelog/types.hpp"

namespace causelog::toml {

namespace {

bool is_bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

bool is_bare_key(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key)
    if (!is_bare_key_char(c)) return false;
  return true;
}

struct LineCursor {
  std::string_view s;
  std::size_t i = 0;
  std::size_t lineno;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(lineno, what); }
  bool done() const { return i >= s.size(); }
  char peek() const { return i < s.size() ? s[i] : '\0'; }
  bool eat(char c) {
    if (peek() == c) {
      ++i;
      return true;
    }
    return false;
  }
  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  bool at_end_or_comment() {
    skip_ws();
    return done() || peek() == '#';
  }

  std::string basic_string() {
    // opening quote already consumed
    std::string out;
    while (true) {
      if (done()) fail("unterminated string");
      char c = s[i++];
      if (c == '"') return out;
      if (c == '\\') {
        if (done()) fail("bad escape at end of line");
        char e = s[i++];
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          default: fail(std::string("unsupported escape '\\") + e + "'");
        }
      } else {
        out += c;
      }
    }
  }

  std::string literal_string() {
    std::string out;
    while (true) {
      if (done()) fail("unterminated literal string");
      char c = s[i++];
      if (c == '\'') return out;
      out += c;
    }
  }

  std::string key() {
    skip_ws();
    if (peek() == '"') {
      ++i;
      return basic_string();
    }
    if (peek() == '\'') {
      ++i;
      return literal_string();
    }
    std::size_t b = i;
    while (!done() && is_bare_key_char(peek())) ++i;
    if (i == b) fail("expected a key");
    return std::string(s.substr(b, i - b));
  }

  Value scalar() {
    skip_ws();
    char c = peek();
    if (c == '"') {
      ++i;
      return Value(basic_string());
    }
    if (c == '\'') {
      ++i;
      return Value(literal_string());
    }
    if (c == '[') {
      ++i;
      Array arr;
      skip_ws();
      if (peek() == ']') {
        ++i;
        return Value(std::move(arr));
      }
      while (true) {
        arr.push_back(scalar());
        skip_ws();
        if (peek() == ',') {
          ++i;
          continue;
        }
        if (peek() == ']') {
          ++i;
          return Value(std::move(arr));
        }
        fail("expected ',' or ']' in array");
      }
    }
    std::size_t b = i;
    while (!done() && peek() != ',' && peek() != ']' && peek() != '#' &&
           peek() != ' ' && peek() != '\t')
      ++i;
    std::string_view tok = s.substr(b, i - b);
    if (tok == "true") return Value(true);
    if (tok == "false") return Value(false);
    if (tok.empty()) fail("expected a value");
    bool floaty = tok.find('.') != std::string_view::npos ||
                  tok.find('e') != std::string_view::npos ||
                  tok.find('E') != std::string_view::npos;
    if (floaty) {
      double d = 0;
      auto r = std::from_chars(tok.data(), tok.data() + tok.size(), d);
      if (r.ec != std::errc{} || r.ptr != tok.data() + tok.size())
        fail("bad number '" + std::string(tok) + "'");
      return Value(d);
    }
    std::int64_t v = 0;
    auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (r.ec != std::errc{} || r.ptr != tok.data() + tok.size())
      fail("bad value '" + std::string(tok) + "'");
    return Value(v);
  }

  std::vector<std::string> table_path(bool double_bracket) {
    std::vector<std::string> path;
    while (true) {
      path.push_back(key());
      skip_ws();
      if (peek() == '.') {
        ++i;
        continue;
      }
      break;
    }
    if (!(peek() == ']')) fail("expected ']'");
    ++i;
    if (double_bracket) {
      if (peek() != ']') fail("expected ']]'");
      ++i;
    }
    if (!at_end_or_comment()) fail("trailing characters after table header");
    return path;
  }
};

Table* descend(Table* t, const std::vector<std::string>& path, std::size_t upto) {
  for (std::size_t k = 0; k < upto; ++k) t = &t->subtable(path[k]);
  return t;
}

void quote_key(std::string& out, const std::string& key) {
  if (is_bare_key(key)) {
    out += key;
    return;
  }
  out += '"';
  for (char c : key) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
}

void write_value(std::string& out, const Value& v) {
  if (v.is_string()) {
    out += '"';
    for (char c : v.as_string()) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
      }
    }
    out += '"';
  } else if (v.is_int()) {
    out += std::to_string(v.as_int());
  } else if (v.is_double()) {
    std::string num = format_time(v.as_double());
    if (num.find('.') == std::string::npos && num.find('e') == std::string::npos &&
        num.find("inf") == std::string::npos && num.find("nan") == std::string::npos)
      num += ".0";
    out += num;
  } else if (v.is_bool()) {
    out += v.as_bool() ? "true" : "false";
  } else {
    out += '[';
    const Array& arr = v.as_array();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (i) out += ", ";
      write_value(out, arr[i]);
    }
    out += ']';
  }
}

void write_table(std::string& out, const Table& t, const std::string& prefix) {
  for (const auto& [k, v] : t.values) {
    quote_key(out, k);
    out += " = ";
    write_value(out, v);
    out += '\n';
  }
  for (const auto& [k, sub] : t.tables) {
    std::string quoted;
    quote_key(quoted, k);
    std::string path = prefix.empty() ? quoted : prefix + "." + quoted;
    out += "\n[" + path + "]\n";
    write_table(out, sub, path);
  }
  for (const auto& [k, arr] : t.table_arrays) {
    std::string quoted;
    quote_key(quoted, k);
    std::string path = prefix.empty() ? quoted : prefix + "." + quoted;
    for (const Table& el : arr) {
      out += "\n[[" + path + "]]\n";
      write_table(out, el, path);
    }
  }
}

}  // namespace

const Value* Table::find_value(std::string_view key) const {
  for (const auto& [k, v] : values)
    if (k == key) return &v;
  return nullptr;
}

const Table* Table::find_table(std::string_view key) const {
  for (const auto& [k, t] : tables)
    if (k == key) return &t;
  return nullptr;
}

const std::vector<Table>* Table::find_table_array(std::string_view key) const {
  for (const auto& [k, a] : table_arrays)
    if (k == key) return &a;
  return nullptr;
}

void Table::set(std::string key, Value v) {
  for (auto& [k, existing] : values) {
    if (k == key) {
      existing = std::move(v);
      return;
    }
  }
  values.emplace_back(std::move(key), std::move(v));
}

Table& Table::subtable(const std::string& key) {
  for (auto& [k, t] : tables)
    if (k == key) return t;
  tables.emplace_back(key, Table{});
  return tables.back().second;
}

std::vector<Table>& Table::table_array(const std::string& key) {
  for (auto& [k, a] : table_arrays)
    if (k == key) return a;
  table_arrays.emplace_back(key, std::vector<Table>{});
  return table_arrays.back().second;
}

Table parse(std::string_view text) {
  Table root;
  Table* current = &root;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++lineno;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    LineCursor c{line, 0, lineno};
    if (c.at_end_or_comment()) continue;

    if (c.peek() == '[') {
      ++c.i;
      bool array = c.peek() == '[';
      if (array) ++c.i;
      auto path = c.table_path(array);
      if (array) {
        auto* parent = descend(&root, path, path.size() - 1);
        auto& arr = parent->table_array(path.back());
        arr.emplace_back();
        current = &arr.back();
      } else {
        current = descend(&root, path, path.size());
      }
      continue;
    }

    std::string key = c.key();
    c.skip_ws();
    if (!c.eat('=')) c.fail("expected '=' after key '" + key + "'");
    Value v = c.scalar();
    if (!c.at_end_or_comment()) c.fail("trailing characters after value of '" + key + "'");
    current->set(std::move(key), std::move(v));
  }
  return root;
}

Table parse_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFileError("cannot open config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string serialize(const Table& root) {
  std::string out;
  write_table(out, root, "");
  return out;
}

void write_file(const Table& root, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path.string());
  out << serialize(root);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace causelog::toml
