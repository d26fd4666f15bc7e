#include "causelog/timeparse.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>

#include "causelog/errors.hpp"
#include "causelog/strutil.hpp"

namespace causelog {

namespace {

constexpr std::array<std::string_view, 12> kMonths = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun",
    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

int month_number(std::string_view name) {
  for (std::size_t i = 0; i < kMonths.size(); ++i)
    if (kMonths[i] == name) return static_cast<int>(i) + 1;
  return 0;
}

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? static_cast<unsigned>(-3) : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct Cursor {
  std::string_view s;
  std::size_t i = 0;

  bool done() const { return i >= s.size(); }
  char peek() const { return i < s.size() ? s[i] : '\0'; }
  bool eat(char c) {
    if (peek() == c) {
      ++i;
      return true;
    }
    return false;
  }
  void skip_spaces() {
    while (i < s.size() && s[i] == ' ') ++i;
  }
  // Fixed-or-bounded-width unsigned integer; -1 on failure.
  int number(int min_digits, int max_digits) {
    int value = 0;
    int n = 0;
    while (n < max_digits && i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      value = value * 10 + (s[i] - '0');
      ++i;
      ++n;
    }
    return n >= min_digits ? value : -1;
  }
};

bool valid_clock(int h, int mi, int sec) {
  return h >= 0 && h < 24 && mi >= 0 && mi < 60 && sec >= 0 && sec < 60;
}

bool valid_date(int y, int mo, int d) {
  return y >= 1 && mo >= 1 && mo <= 12 && d >= 1 && d <= 31;
}

double fraction(Cursor& c) {
  if (!c.eat('.')) return 0.0;
  double scale = 0.1;
  double value = 0.0;
  bool any = false;
  while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) {
    value += (c.peek() - '0') * scale;
    scale *= 0.1;
    ++c.i;
    any = true;
  }
  return any ? value : -1.0;
}

// "Z", "+HH:MM", "+HHMM", "-HH:MM", "-HHMM" → seconds east of UTC.
std::optional<int> utc_offset(Cursor& c) {
  if (c.eat('Z')) return 0;
  int sign = 0;
  if (c.eat('+'))
    sign = 1;
  else if (c.eat('-'))
    sign = -1;
  else
    return std::nullopt;
  int h = c.number(2, 2);
  c.eat(':');
  int m = c.number(2, 2);
  if (h < 0 || m < 0 || h > 23 || m > 59) return std::nullopt;
  return sign * (h * 3600 + m * 60);
}

std::optional<double> parse_epoch(std::string_view s) {
  // shape check: digits, optionally '.' digits
  Cursor c{s};
  if (c.done() || !std::isdigit(static_cast<unsigned char>(c.peek()))) return std::nullopt;
  while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) ++c.i;
  if (c.eat('.')) {
    if (c.done()) return std::nullopt;
    while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) ++c.i;
  }
  if (!c.done()) return std::nullopt;
  double value = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), value);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

// MMM dd HH:MM:SS (syslog, year-less)
std::optional<double> parse_syslog(std::string_view s, int year) {
  if (s.size() < 4) return std::nullopt;
  int mo = month_number(s.substr(0, 3));
  if (mo == 0 || s[3] != ' ') return std::nullopt;
  Cursor c{s, 3};
  c.skip_spaces();
  int d = c.number(1, 2);
  if (d < 0 || !c.eat(' ')) return std::nullopt;
  int h = c.number(2, 2);
  if (h < 0 || !c.eat(':')) return std::nullopt;
  int mi = c.number(2, 2);
  if (mi < 0 || !c.eat(':')) return std::nullopt;
  int sec = c.number(2, 2);
  if (sec < 0 || !c.done()) return std::nullopt;
  if (!valid_date(year, mo, d) || !valid_clock(h, mi, sec)) return std::nullopt;
  return static_cast<double>(days_from_civil(year, mo, d)) * 86400.0 +
         h * 3600 + mi * 60 + sec;
}

// dd/MMM/yyyy:HH:MM:SS [±ZZZZ]
std::optional<double> parse_access(std::string_view s) {
  Cursor c{s};
  int d = c.number(1, 2);
  if (d < 0 || !c.eat('/')) return std::nullopt;
  if (c.i + 3 > s.size()) return std::nullopt;
  int mo = month_number(s.substr(c.i, 3));
  if (mo == 0) return std::nullopt;
  c.i += 3;
  if (!c.eat('/')) return std::nullopt;
  int y = c.number(4, 4);
  if (y < 0 || !c.eat(':')) return std::nullopt;
  int h = c.number(2, 2);
  if (h < 0 || !c.eat(':')) return std::nullopt;
  int mi = c.number(2, 2);
  if (mi < 0 || !c.eat(':')) return std::nullopt;
  int sec = c.number(2, 2);
  if (sec < 0) return std::nullopt;
  int off = 0;
  if (!c.done()) {
    c.skip_spaces();
    auto o = utc_offset(c);
    if (!o || !c.done()) return std::nullopt;
    off = *o;
  }
  if (!valid_date(y, mo, d) || !valid_clock(h, mi, sec)) return std::nullopt;
  return static_cast<double>(days_from_civil(y, mo, d)) * 86400.0 + h * 3600 +
         mi * 60 + sec - off;
}

// YYYY-MM-DD[T ]HH:MM:SS[.frac][Z|±HH:MM|±HHMM]
std::optional<double> parse_iso(std::string_view s) {
  Cursor c{s};
  int y = c.number(4, 4);
  if (y < 0 || !c.eat('-')) return std::nullopt;
  int mo = c.number(2, 2);
  if (mo < 0 || !c.eat('-')) return std::nullopt;
  int d = c.number(2, 2);
  if (d < 0) return std::nullopt;
  if (!c.eat('T') && !c.eat(' ')) return std::nullopt;
  int h = c.number(2, 2);
  if (h < 0 || !c.eat(':')) return std::nullopt;
  int mi = c.number(2, 2);
  if (mi < 0 || !c.eat(':')) return std::nullopt;
  int sec = c.number(2, 2);
  if (sec < 0) return std::nullopt;
  double frac = 0.0;
  if (c.peek() == '.') {
    frac = fraction(c);
    if (frac < 0) return std::nullopt;
  }
  int off = 0;
  if (!c.done()) {
    auto o = utc_offset(c);
    if (!o || !c.done()) return std::nullopt;
    off = *o;
  }
  if (!valid_date(y, mo, d) || !valid_clock(h, mi, sec)) return std::nullopt;
  return static_cast<double>(days_from_civil(y, mo, d)) * 86400.0 + h * 3600 +
         mi * 60 + sec + frac - off;
}

}  // namespace

double parse_timestamp(std::string_view raw, int default_year) {
  std::string_view s = trim_view(raw);
  if (s.empty()) throw UnparseableTimestampError(std::string(raw));

  std::optional<double> t;
  if (std::isdigit(static_cast<unsigned char>(s[0]))) {
    t = parse_epoch(s);
    if (!t) t = parse_access(s);
    if (!t) t = parse_iso(s);
  } else {
    t = parse_syslog(s, default_year);
  }
  if (!t || !std::isfinite(*t) || *t < 0.0)
    throw UnparseableTimestampError(std::string(raw));
  return *t;
}

std::optional<std::pair<std::string, std::string>> split_leading_timestamp(
    std::string_view line) {
  // syslog: "MMM dd HH:MM:SS rest"
  if (line.size() >= 4 && month_number(line.substr(0, 3)) != 0 && line[3] == ' ') {
    Cursor c{line, 3};
    c.skip_spaces();
    if (c.number(1, 2) >= 0 && c.eat(' ') && c.number(2, 2) >= 0 && c.eat(':') &&
        c.number(2, 2) >= 0 && c.eat(':') && c.number(2, 2) >= 0 &&
        (c.done() || c.peek() == ' ')) {
      std::string stamp(line.substr(0, c.i));
      std::string rest(trim_view(line.substr(c.i)));
      return std::make_pair(std::move(stamp), std::move(rest));
    }
  }
  // ISO or bare epoch prefix up to the first space
  std::size_t sp = line.find(' ');
  std::string_view head = sp == std::string_view::npos ? line : line.substr(0, sp);
  if (!head.empty() && std::isdigit(static_cast<unsigned char>(head[0]))) {
    if (parse_iso(head) || parse_epoch(head)) {
      std::string stamp(head);
      std::string rest(sp == std::string_view::npos ? std::string_view{}
                                                    : trim_view(line.substr(sp)));
      return std::make_pair(std::move(stamp), std::move(rest));
    }
  }
  return std::nullopt;
}

}  // namespace causelog
