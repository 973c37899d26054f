#include "korpus/timeutil.hpp"

#include <cstdio>

#include "korpus/error.hpp"

namespace korpus {

using namespace std::chrono;

std::string format_timestamp(Timestamp t) {
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

Timestamp parse_timestamp(std::string_view text) {
  int y = 0;
  unsigned mo = 0, d = 0;
  int h = 0, mi = 0, s = 0;
  std::string str(text);
  if (std::sscanf(str.c_str(), "%d-%u-%uT%d:%d:%dZ", &y, &mo, &d, &h, &mi, &s) != 6) {
    throw Error(ErrorCode::ParseError, "bad timestamp: " + str);
  }
  const year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok()) throw Error(ErrorCode::ParseError, "bad timestamp: " + str);
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

Date parse_date(std::string_view text) {
  int y = 0;
  unsigned mo = 0, d = 0;
  std::string str(text);
  if (std::sscanf(str.c_str(), "%d-%u-%u", &y, &mo, &d) != 3) {
    throw Error(ErrorCode::ParseError, "bad date: " + str);
  }
  const Date ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok()) throw Error(ErrorCode::ParseError, "bad date: " + str);
  return ymd;
}

Timestamp now_seconds() { return floor<seconds>(system_clock::now()); }

Date today() { return Date{floor<days>(system_clock::now())}; }

}  // namespace korpus
