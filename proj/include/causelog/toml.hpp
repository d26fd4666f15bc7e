#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "causelog/errors.hpp"

namespace causelog::toml {

// Supported subset: bare/quoted keys, basic ("...") and literal ('...')
// strings, integers, floats, booleans, single-line arrays of scalars,
// [table], [a.b], and [[array.of.tables]]. Insertion order is preserved.

class Value;
using Array = std::vector<Value>;

class Value {
 public:
  using Storage = std::variant<std::string, std::int64_t, double, bool, Array>;

  Value() : v_(std::string{}) {}
  Value(std::string s) : v_(std::move(s)) {}
  Value(const char* s) : v_(std::string(s)) {}
  Value(std::int64_t i) : v_(i) {}
  Value(int i) : v_(static_cast<std::int64_t>(i)) {}
  Value(double d) : v_(d) {}
  Value(bool b) : v_(b) {}
  Value(Array a) : v_(std::move(a)) {}

  bool is_string() const { return std::holds_alternative<std::string>(v_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_double() const { return std::holds_alternative<double>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_array() const { return std::holds_alternative<Array>(v_); }

  const std::string& as_string() const { return std::get<std::string>(v_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  double as_double() const {
    return is_int() ? static_cast<double>(as_int()) : std::get<double>(v_);
  }
  bool as_bool() const { return std::get<bool>(v_); }
  const Array& as_array() const { return std::get<Array>(v_); }

  const Storage& storage() const { return v_; }

  friend bool operator==(const Value& a, const Value& b) { return a.v_ == b.v_; }

 private:
  Storage v_;
};

struct Table {
  std::vector<std::pair<std::string, Value>> values;
  std::vector<std::pair<std::string, Table>> tables;
  std::vector<std::pair<std::string, std::vector<Table>>> table_arrays;

  const Value* find_value(std::string_view key) const;
  const Table* find_table(std::string_view key) const;
  const std::vector<Table>* find_table_array(std::string_view key) const;

  void set(std::string key, Value v);
  Table& subtable(const std::string& key);
  std::vector<Table>& table_array(const std::string& key);

  bool operator==(const Table&) const = default;
};

class ParseError : public MalformedConfigError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : MalformedConfigError("line " + std::to_string(line), what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

Table parse(std::string_view text);
Table parse_file(const std::filesystem::path& path);

std::string serialize(const Table& root);
void write_file(const Table& root, const std::filesystem::path& path);

}  // namespace causelog::toml
