#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace gridpanel {

// Hours since 1970-01-01T00:00:00Z.
using EpochHour = std::int64_t;
// Days since 1970-01-01 in some fixed civil frame (UTC or a region's standard time).
using EpochDay = std::int64_t;

struct CivilDate {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  friend bool operator==(const CivilDate&, const CivilDate&) = default;
};

struct TimestampParse {
  bool ok = false;
  EpochHour hour = 0;
  int offset_minutes = 0;
  std::string error;
};

// Accepts "YYYY-MM-DDTHH:00:00" followed by "Z" or "+HH:MM"/"-HH:MM".
// Minutes and seconds must be zero and the offset must be a whole number of
// hours so every stamp lands on a UTC hour boundary.
TimestampParse parse_timestamp(std::string_view text);

std::string format_timestamp(EpochHour hour, int offset_minutes);

// "YYYY-MM-DD".
std::optional<CivilDate> parse_date(std::string_view text);
std::string format_date(CivilDate date);

EpochDay day_from_civil(CivilDate date);
CivilDate civil_from_day(EpochDay day);

// Day/hour-of-day of an epoch hour as seen from a fixed-offset clock.
EpochDay local_day(EpochHour hour, int offset_minutes);
int local_hour_of_day(EpochHour hour, int offset_minutes);

// First hour (inclusive) of a local day expressed back in epoch hours.
EpochHour day_start_hour(EpochDay day, int offset_minutes);

inline int month_of_day(EpochDay day) { return civil_from_day(day).month; }
inline int year_of_day(EpochDay day) { return civil_from_day(day).year; }

}  // namespace gridpanel
