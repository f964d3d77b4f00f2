#pragma once

#include <chrono>
#include <cstdio>
#include <string>

namespace rescue {

using Timestamp = std::chrono::sys_seconds;

/// An instant paired with the US/Central offset in force at that instant.
struct CentralTime {
  Timestamp utc{};
  std::chrono::seconds offset{};  // -5h (CDT) or -6h (CST)

  bool is_daylight() const { return offset == std::chrono::hours(-5); }
  const char* abbreviation() const { return is_daylight() ? "CDT" : "CST"; }

  std::chrono::local_seconds local() const {
    return std::chrono::local_seconds{utc.time_since_epoch() + offset};
  }

  Timestamp to_utc() const { return utc; }

  /// ISO 8601 with numeric offset, e.g. "2017-08-27T07:00:00-05:00".
  std::string iso8601() const {
    using namespace std::chrono;
    auto lt = local();
    auto day = floor<days>(lt);
    year_month_day ymd{day};
    hh_mm_ss hms{lt - day};
    auto off = duration_cast<minutes>(offset).count();
    char sign = off < 0 ? '-' : '+';
    if (off < 0) off = -off;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ld%c%02ld:%02ld",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<long>(hms.hours().count()),
                  static_cast<long>(hms.minutes().count()),
                  static_cast<long>(hms.seconds().count()), sign, static_cast<long>(off / 60),
                  static_cast<long>(off % 60));
    return buf;
  }

  /// iso8601() followed by the zone abbreviation, for display.
  std::string display() const { return iso8601() + " " + abbreviation(); }

  friend bool operator==(const CentralTime&, const CentralTime&) = default;
};

namespace detail {

inline std::chrono::sys_days nth_sunday(std::chrono::year y, std::chrono::month m, unsigned n) {
  using namespace std::chrono;
  return sys_days{year_month_weekday{y, m, weekday_indexed{Sunday, n}}};
}

inline std::chrono::sys_days last_sunday(std::chrono::year y, std::chrono::month m) {
  using namespace std::chrono;
  return sys_days{year_month_weekday_last{y, m, weekday_last{Sunday}}};
}

}  // namespace detail

/// US/Central daylight-saving window for `year`, as UTC instants
/// [start, end). Transitions happen at 02:00 local standard time going in
/// and 02:00 local daylight time coming out, i.e. 08:00Z and 07:00Z.
///
/// Rules: 2007+ second Sunday of March to first Sunday of November;
/// 1987-2006 first Sunday of April to last Sunday of October;
/// 1967-1986 last Sunday of April to last Sunday of October. The 1974-75
/// emergency schedules are not modelled. Years before 1967 have no DST.
inline bool central_dst_window(int year, Timestamp& start, Timestamp& end) {
  using namespace std::chrono;
  using detail::last_sunday;
  using detail::nth_sunday;
  const std::chrono::year y{year};
  sys_days s, e;
  if (year >= 2007) {
    s = nth_sunday(y, March, 2);
    e = nth_sunday(y, November, 1);
  } else if (year >= 1987) {
    s = nth_sunday(y, April, 1);
    e = last_sunday(y, October);
  } else if (year >= 1967) {
    s = last_sunday(y, April);
    e = last_sunday(y, October);
  } else {
    return false;
  }
  start = s + hours(8);
  end = e + hours(7);
  return true;
}

inline CentralTime to_local_time(Timestamp utc) {
  using namespace std::chrono;
  const int year = static_cast<int>(year_month_day{floor<days>(utc)}.year());
  Timestamp start, end;
  bool dst = central_dst_window(year, start, end) && utc >= start && utc < end;
  return CentralTime{utc, dst ? hours(-5) : hours(-6)};
}

}  // namespace rescue
