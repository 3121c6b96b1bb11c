#ifndef LCAT_TIME_UTIL_HPP
#define LCAT_TIME_UTIL_HPP

#include <cstdint>
#include <string>

namespace lcat {

struct CivilTime {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
  int hour = 0;
  int minute = 0;
  int second = 0;
};

// Proleptic Gregorian day count relative to 1970-01-01.
std::int64_t days_from_civil(int year, int month, int day);
CivilTime civil_from_seconds(std::int64_t seconds);
std::int64_t seconds_from_civil(const CivilTime& c);

// Parses "YYYY-MM-DD[T ]HH:MM[:SS]" as local wall-clock seconds. A trailing
// "Z" or "+HH:MM"/"-HH:MM" offset is accepted and ignored; comparisons across
// years use identical calendar windows. Returns false on parse failure.
bool parse_iso8601(const std::string& text, std::int64_t& seconds_out);

std::string format_iso8601(std::int64_t seconds);

// 0 = Monday .. 6 = Sunday.
int weekday_from_seconds(std::int64_t seconds);

}  // namespace lcat

#endif  // LCAT_TIME_UTIL_HPP
