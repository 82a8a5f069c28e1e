#include "stargaze/time.hpp"

#include "stargaze/error.hpp"

#include <cstdio>

namespace stargaze {

namespace {

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(std::int64_t y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y += m <= 2;
}

bool all_digits(const char* s, int n) {
  for (int i = 0; i < n; ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

int to_int(const char* s, int n) {
  int v = 0;
  for (int i = 0; i < n; ++i) v = v * 10 + (s[i] - '0');
  return v;
}

} // namespace

Timestamp parse_iso8601(const std::string& text) {
  // YYYY-MM-DDTHH:MM:SSZ
  const char* s = text.c_str();
  const bool shape_ok =
      text.size() == 20 && s[4] == '-' && s[7] == '-' && s[10] == 'T' &&
      s[13] == ':' && s[16] == ':' && s[19] == 'Z' && all_digits(s, 4) &&
      all_digits(s + 5, 2) && all_digits(s + 8, 2) && all_digits(s + 11, 2) &&
      all_digits(s + 14, 2) && all_digits(s + 17, 2);
  if (!shape_ok)
    raise(errc::invalid_argument, "bad ISO-8601 timestamp: '" + text + "'");
  const int year = to_int(s, 4), month = to_int(s + 5, 2), day = to_int(s + 8, 2);
  const int hh = to_int(s + 11, 2), mm = to_int(s + 14, 2), ss = to_int(s + 17, 2);
  if (month < 1 || month > 12 || day < 1 || day > 31 || hh > 23 || mm > 59 ||
      ss > 60)
    raise(errc::invalid_argument, "bad ISO-8601 timestamp: '" + text + "'");
  return days_from_civil(year, month, day) * kSecondsPerDay + hh * 3600 +
         mm * 60 + ss;
}

std::string format_iso8601(Timestamp t) {
  std::int64_t days = t / kSecondsPerDay;
  std::int64_t rem = t % kSecondsPerDay;
  if (rem < 0) {
    rem += kSecondsPerDay;
    days -= 1;
  }
  std::int64_t y;
  int m, d;
  civil_from_days(days, y, m, d);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%04lld-%02d-%02dT%02d:%02d:%02dZ",
                static_cast<long long>(y), m, d, static_cast<int>(rem / 3600),
                static_cast<int>((rem % 3600) / 60), static_cast<int>(rem % 60));
  return buf;
}

} // namespace stargaze
