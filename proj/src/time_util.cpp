#include "lcat/time_util.hpp"

#include <cstdio>

namespace lcat {

std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

static void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

CivilTime civil_from_seconds(std::int64_t seconds) {
  std::int64_t days = seconds / 86400;
  std::int64_t rem = seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  CivilTime c;
  civil_from_days(days, c.year, c.month, c.day);
  c.hour = static_cast<int>(rem / 3600);
  c.minute = static_cast<int>((rem / 60) % 60);
  c.second = static_cast<int>(rem % 60);
  return c;
}

std::int64_t seconds_from_civil(const CivilTime& c) {
  return days_from_civil(c.year, c.month, c.day) * 86400 + c.hour * 3600 + c.minute * 60 +
         c.second;
}

bool parse_iso8601(const std::string& text, std::int64_t& seconds_out) {
  CivilTime c;
  int n = 0;
  int got = std::sscanf(text.c_str(), "%d-%d-%d%*1[T ]%d:%d:%d%n", &c.year, &c.month, &c.day,
                        &c.hour, &c.minute, &c.second, &n);
  if (got < 5) return false;
  if (got == 5) {
    c.second = 0;
    // re-scan to find the end of HH:MM for trailing-garbage detection
    std::sscanf(text.c_str(), "%d-%d-%d%*1[T ]%d:%d%n", &c.year, &c.month, &c.day, &c.hour,
                &c.minute, &n);
  }
  std::string rest = text.substr(static_cast<std::size_t>(n));
  if (!rest.empty() && rest != "Z") {
    // tolerate a numeric UTC offset; wall-clock time is kept
    int oh = 0, om = 0, consumed = 0;
    if (std::sscanf(rest.c_str(), "%d:%d%n", &oh, &om, &consumed) != 2 ||
        consumed != static_cast<int>(rest.size()))
      return false;
  }
  if (c.month < 1 || c.month > 12 || c.day < 1 || c.day > 31) return false;
  if (c.hour < 0 || c.hour > 23 || c.minute < 0 || c.minute > 59 || c.second < 0 || c.second > 60)
    return false;
  seconds_out = seconds_from_civil(c);
  return true;
}

std::string format_iso8601(std::int64_t seconds) {
  CivilTime c = civil_from_seconds(seconds);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d", c.year, c.month, c.day, c.hour,
                c.minute, c.second);
  return buf;
}

int weekday_from_seconds(std::int64_t seconds) {
  std::int64_t days = seconds / 86400;
  if (seconds % 86400 < 0) days -= 1;
  // 1970-01-01 was a Thursday (index 3 with Monday = 0)
  std::int64_t wd = (days + 3) % 7;
  if (wd < 0) wd += 7;
  return static_cast<int>(wd);
}

}  // namespace lcat
