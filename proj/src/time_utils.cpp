#include "depgraph/time_utils.hpp"

#include <array>
#include <cstdio>

namespace depgraph {

namespace {

// Howard Hinnant's civil-date algorithms; exact over the full int range.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct Civil {
  int year;
  unsigned month;
  unsigned day;
};

Civil civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return {static_cast<int>(y + (m <= 2)), m, d};
}

bool is_leap(int y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

unsigned days_in_month(int y, unsigned m) {
  static constexpr std::array<unsigned, 12> kDays = {31, 28, 31, 30, 31, 30,
                                                     31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return kDays[m - 1];
}

// Reads exactly `n` digits starting at pos; advances pos on success.
bool read_digits(std::string_view s, std::size_t& pos, int n, int& out) {
  if (pos + n > s.size()) return false;
  int v = 0;
  for (int i = 0; i < n; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  pos += n;
  out = v;
  return true;
}

Civil civil_of(Timestamp t) {
  std::int64_t days = t / 86400;
  if (t % 86400 < 0) --days;
  return civil_from_days(days);
}

}  // namespace

std::optional<Timestamp> parse_rfc3339(std::string_view text) {
  std::size_t pos = 0;
  int year, month, day, hour, minute, second;
  if (!read_digits(text, pos, 4, year)) return std::nullopt;
  if (pos >= text.size() || text[pos] != '-') return std::nullopt;
  ++pos;
  if (!read_digits(text, pos, 2, month)) return std::nullopt;
  if (pos >= text.size() || text[pos] != '-') return std::nullopt;
  ++pos;
  if (!read_digits(text, pos, 2, day)) return std::nullopt;
  if (pos >= text.size()) return std::nullopt;
  char sep = text[pos];
  if (sep != 'T' && sep != 't' && sep != ' ') return std::nullopt;
  ++pos;
  if (!read_digits(text, pos, 2, hour)) return std::nullopt;
  if (pos >= text.size() || text[pos] != ':') return std::nullopt;
  ++pos;
  if (!read_digits(text, pos, 2, minute)) return std::nullopt;
  if (pos >= text.size() || text[pos] != ':') return std::nullopt;
  ++pos;
  if (!read_digits(text, pos, 2, second)) return std::nullopt;

  if (month < 1 || month > 12 || day < 1 ||
      day > static_cast<int>(days_in_month(year, month)))
    return std::nullopt;
  if (hour > 23 || minute > 59 || second > 60) return std::nullopt;
  if (second == 60) second = 59;  // fold leap seconds

  // Fractional seconds: truncated.
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == start) return std::nullopt;
  }

  if (pos >= text.size()) return std::nullopt;
  std::int64_t offset = 0;
  char c = text[pos];
  if (c == 'Z' || c == 'z') {
    ++pos;
  } else if (c == '+' || c == '-') {
    ++pos;
    int oh, om;
    if (!read_digits(text, pos, 2, oh)) return std::nullopt;
    if (pos >= text.size() || text[pos] != ':') return std::nullopt;
    ++pos;
    if (!read_digits(text, pos, 2, om)) return std::nullopt;
    if (oh > 23 || om > 59) return std::nullopt;
    offset = static_cast<std::int64_t>(oh) * 3600 + om * 60;
    if (c == '-') offset = -offset;
  } else {
    return std::nullopt;
  }
  if (pos != text.size()) return std::nullopt;

  std::int64_t days = days_from_civil(year, static_cast<unsigned>(month),
                                      static_cast<unsigned>(day));
  return days * 86400 + hour * 3600 + minute * 60 + second - offset;
}

std::string format_rfc3339(Timestamp t) {
  std::int64_t days = t / 86400;
  std::int64_t secs = t % 86400;
  if (secs < 0) {
    secs += 86400;
    --days;
  }
  Civil c = civil_from_days(days);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ",
                c.year, c.month, c.day,
                static_cast<long long>(secs / 3600),
                static_cast<long long>((secs % 3600) / 60),
                static_cast<long long>(secs % 60));
  return buf;
}

Timestamp year_start(int year) { return days_from_civil(year, 1, 1) * 86400; }

Timestamp month_start(int year, int month) {
  return days_from_civil(year, static_cast<unsigned>(month), 1) * 86400;
}

Timestamp floor_boundary(Timestamp t, Cadence cadence) {
  Civil c = civil_of(t);
  if (cadence == Cadence::Yearly) return year_start(c.year);
  return month_start(c.year, static_cast<int>(c.month));
}

Timestamp next_boundary(Timestamp t, Cadence cadence) {
  Civil c = civil_of(t);
  if (cadence == Cadence::Yearly) return year_start(c.year + 1);
  if (c.month == 12) return month_start(c.year + 1, 1);
  return month_start(c.year, static_cast<int>(c.month) + 1);
}

Timestamp ceil_boundary(Timestamp t, Cadence cadence) {
  Timestamp f = floor_boundary(t, cadence);
  return f == t ? t : next_boundary(t, cadence);
}

std::vector<Timestamp> boundaries_in(Timestamp t0, Timestamp t1, Cadence cadence) {
  std::vector<Timestamp> out;
  for (Timestamp b = ceil_boundary(t0, cadence); b <= t1;
       b = next_boundary(b, cadence))
    out.push_back(b);
  return out;
}

}  // namespace depgraph
