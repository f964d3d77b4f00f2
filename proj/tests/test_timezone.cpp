#include <gtest/gtest.h>

#include "rescue/timezone.hpp"
#include "rescue/tweet.hpp"

using namespace rescue;
using namespace std::chrono;

namespace {

Timestamp at(const char* iso) { return *parse_timestamp(iso); }

struct Transition {
  int year;
  const char* dst_start;  // first instant of CDT, UTC
  const char* dst_end;    // first instant of CST again, UTC
};

// America/Chicago transitions as reported by the IANA tz database
// (Python zoneinfo), frozen here as the oracle.
constexpr Transition kTzdb[] = {
    {1970, "1970-04-26T08:00:00Z", "1970-10-25T07:00:00Z"},
    {1980, "1980-04-27T08:00:00Z", "1980-10-26T07:00:00Z"},
    {1986, "1986-04-27T08:00:00Z", "1986-10-26T07:00:00Z"},
    {1987, "1987-04-05T08:00:00Z", "1987-10-25T07:00:00Z"},
    {1990, "1990-04-01T08:00:00Z", "1990-10-28T07:00:00Z"},
    {2000, "2000-04-02T08:00:00Z", "2000-10-29T07:00:00Z"},
    {2006, "2006-04-02T08:00:00Z", "2006-10-29T07:00:00Z"},
    {2007, "2007-03-11T08:00:00Z", "2007-11-04T07:00:00Z"},
    {2016, "2016-03-13T08:00:00Z", "2016-11-06T07:00:00Z"},
    {2017, "2017-03-12T08:00:00Z", "2017-11-05T07:00:00Z"},
    {2018, "2018-03-11T08:00:00Z", "2018-11-04T07:00:00Z"},
    {2020, "2020-03-08T08:00:00Z", "2020-11-01T07:00:00Z"},
    {2024, "2024-03-10T08:00:00Z", "2024-11-03T07:00:00Z"},
    {2030, "2030-03-10T08:00:00Z", "2030-11-03T07:00:00Z"},
};

}  // namespace

TEST(LocalTime, Examples) {
  EXPECT_EQ(to_local_time(at("2017-08-27T12:00:00Z")).iso8601(), "2017-08-27T07:00:00-05:00");
  EXPECT_EQ(to_local_time(at("2017-08-27T03:00:00Z")).iso8601(), "2017-08-26T22:00:00-05:00");
  EXPECT_EQ(to_local_time(at("2017-01-15T12:00:00Z")).iso8601(), "2017-01-15T06:00:00-06:00");
}

TEST(LocalTime, DisplayNamesZone) {
  EXPECT_EQ(to_local_time(at("2017-08-27T12:00:00Z")).display(), "2017-08-27T07:00:00-05:00 CDT");
  EXPECT_EQ(to_local_time(at("2017-12-25T18:00:00Z")).abbreviation(), std::string("CST"));
}

TEST(LocalTime, MatchesTzdbTransitions) {
  for (const auto& t : kTzdb) {
    SCOPED_TRACE(t.year);
    Timestamp start, end;
    ASSERT_TRUE(central_dst_window(t.year, start, end));
    EXPECT_EQ(start, at(t.dst_start));
    EXPECT_EQ(end, at(t.dst_end));
    EXPECT_FALSE(to_local_time(start - seconds(1)).is_daylight());
    EXPECT_TRUE(to_local_time(start).is_daylight());
    EXPECT_TRUE(to_local_time(end - seconds(1)).is_daylight());
    EXPECT_FALSE(to_local_time(end).is_daylight());
  }
}

TEST(LocalTime, RoundTrip) {
  Timestamp t = at("2017-01-01T00:00:00Z");
  for (int i = 0; i < 366 * 4; ++i, t += hours(6)) {
    CentralTime c = to_local_time(t);
    EXPECT_EQ(c.to_utc(), t);
    EXPECT_EQ(c.local().time_since_epoch(), t.time_since_epoch() + c.offset);
  }
}

TEST(LocalTime, NoDstBefore1967) {
  Timestamp s, e;
  EXPECT_FALSE(central_dst_window(1960, s, e));
  EXPECT_EQ(to_local_time(at("1960-07-01T12:00:00Z")).offset, hours(-6));
}
