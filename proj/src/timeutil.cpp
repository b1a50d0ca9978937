#include "gridpanel/timeutil.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace gridpanel {

namespace {

bool parse_int(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) return false;
  const char* first = text.data() + pos;
  const char* last = first + len;
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

TimestampParse parse_timestamp(std::string_view text) {
  TimestampParse r;
  auto fail = [&](std::string msg) {
    r.ok = false;
    r.error = std::move(msg);
    return r;
  };
  if (text.size() < 20) return fail("timestamp too short");
  int year = 0, month = 0, day = 0, hh = 0, mm = 0, ss = 0;
  if (!parse_int(text, 0, 4, year) || text[4] != '-' || !parse_int(text, 5, 2, month) ||
      text[7] != '-' || !parse_int(text, 8, 2, day) || text[10] != 'T' ||
      !parse_int(text, 11, 2, hh) || text[13] != ':' || !parse_int(text, 14, 2, mm) ||
      text[16] != ':' || !parse_int(text, 17, 2, ss)) {
    return fail("timestamp not in YYYY-MM-DDTHH:MM:SS form");
  }
  if (mm != 0 || ss != 0) return fail("timestamp not on an hour boundary");
  if (hh < 0 || hh > 23) return fail("hour out of range");
  if (year < 1900 || year > 2200) return fail("year out of range");
  std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{unsigned(month)},
                                  std::chrono::day{unsigned(day)}};
  if (!ymd.ok()) return fail("invalid calendar date");

  std::string_view tail = text.substr(19);
  int offset = 0;
  if (tail == "Z") {
    offset = 0;
  } else if (tail.size() == 6 && (tail[0] == '+' || tail[0] == '-') && tail[3] == ':') {
    int oh = 0, om = 0;
    if (!parse_int(tail, 1, 2, oh) || !parse_int(tail, 4, 2, om)) {
      return fail("malformed UTC offset");
    }
    if (oh > 18 || om > 59) return fail("UTC offset out of range");
    offset = oh * 60 + om;
    if (tail[0] == '-') offset = -offset;
    if (offset % 60 != 0) return fail("UTC offset must be whole hours");
  } else {
    return fail("missing or malformed UTC offset");
  }

  std::chrono::sys_days sd{ymd};
  r.hour = EpochHour(sd.time_since_epoch().count()) * 24 + hh - offset / 60;
  r.offset_minutes = offset;
  r.ok = true;
  return r;
}

std::string format_timestamp(EpochHour hour, int offset_minutes) {
  std::int64_t local_minutes = hour * 60 + offset_minutes;
  EpochDay day = floor_div(local_minutes, 1440);
  int mins = int(local_minutes - day * 1440);
  CivilDate cd = civil_from_day(day);
  char sign = offset_minutes < 0 ? '-' : '+';
  int abs_off = offset_minutes < 0 ? -offset_minutes : offset_minutes;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:00%c%02d:%02d", cd.year, cd.month,
                cd.day, mins / 60, mins % 60, sign, abs_off / 60, abs_off % 60);
  return buf;
}

std::optional<CivilDate> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int year = 0, month = 0, day = 0;
  if (!parse_int(text, 0, 4, year) || !parse_int(text, 5, 2, month) || !parse_int(text, 8, 2, day)) {
    return std::nullopt;
  }
  std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{unsigned(month)},
                                  std::chrono::day{unsigned(day)}};
  if (!ymd.ok()) return std::nullopt;
  return CivilDate{year, month, day};
}

std::string format_date(CivilDate date) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", date.year, date.month, date.day);
  return buf;
}

EpochDay day_from_civil(CivilDate date) {
  std::chrono::year_month_day ymd{std::chrono::year{date.year}, std::chrono::month{unsigned(date.month)},
                                  std::chrono::day{unsigned(date.day)}};
  return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

CivilDate civil_from_day(EpochDay day) {
  std::chrono::sys_days sd{std::chrono::days{day}};
  std::chrono::year_month_day ymd{sd};
  return CivilDate{int(ymd.year()), int(unsigned(ymd.month())), int(unsigned(ymd.day()))};
}

EpochDay local_day(EpochHour hour, int offset_minutes) {
  return floor_div(hour * 60 + offset_minutes, 1440);
}

int local_hour_of_day(EpochHour hour, int offset_minutes) {
  std::int64_t local_minutes = hour * 60 + offset_minutes;
  EpochDay day = floor_div(local_minutes, 1440);
  return int((local_minutes - day * 1440) / 60);
}

EpochHour day_start_hour(EpochDay day, int offset_minutes) {
  // Offsets are whole hours, so the division is exact.
  return day * 24 - offset_minutes / 60;
}

}  // namespace gridpanel
