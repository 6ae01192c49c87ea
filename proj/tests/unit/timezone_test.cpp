#include <doctest.h>

#include "gridworth/errors.hpp"
#include "gridworth/timezone.hpp"

using namespace gridworth;
using namespace std::chrono;

namespace {
Instant at(int y, unsigned mo, unsigned d, int h, int mi = 0) {
    return sys_days{year{y} / mo / d} + hours{h} + minutes{mi};
}
} // namespace

TEST_CASE("Pacific offsets across the 2013 DST transitions") {
    const TimeZone tz = TimeZone::load("America/Los_Angeles");

    // Winter: PST = UTC-8.
    CHECK(tz.utc_offset(at(2013, 1, 15, 12)) == hours{-8});
    CHECK_FALSE(tz.is_dst(at(2013, 1, 15, 12)));

    // Summer: PDT = UTC-7.
    CHECK(tz.utc_offset(at(2013, 7, 15, 12)) == hours{-7});
    CHECK(tz.is_dst(at(2013, 7, 15, 12)));

    // Spring forward: 2013-03-10 02:00 PST -> 03:00 PDT (10:00 UTC).
    CHECK(tz.utc_offset(at(2013, 3, 10, 9, 59)) == hours{-8});
    CHECK(tz.utc_offset(at(2013, 3, 10, 10, 0)) == hours{-7});

    // Fall back: 2013-11-03 02:00 PDT -> 01:00 PST (09:00 UTC).
    CHECK(tz.utc_offset(at(2013, 11, 3, 8, 59)) == hours{-7});
    CHECK(tz.utc_offset(at(2013, 11, 3, 9, 0)) == hours{-8});
}

TEST_CASE("local conversion lands on the expected civil time") {
    const TimeZone tz = TimeZone::load("America/Los_Angeles");
    const LocalTime lt = tz.to_local(at(2013, 1, 2, 20)); // 20:00 UTC = noon PST
    const auto dp = floor<days>(lt);
    CHECK(year_month_day{dp} == year_month_day{year{2013} / 1 / 2});
    CHECK(duration_cast<hours>(lt - dp) == hours{12});
}

TEST_CASE("UTC zone is a zero-offset fallback") {
    const TimeZone utc = TimeZone::utc();
    CHECK(utc.utc_offset(at(2013, 6, 1, 0)) == seconds{0});
    CHECK(utc.name() == "UTC");
}

TEST_CASE("unknown or unsafe zone names are rejected") {
    CHECK_THROWS_AS(TimeZone::load("Nowhere/Nothing"), CalendarError);
    CHECK_THROWS_AS(TimeZone::load("../etc/passwd"), CalendarError);
    CHECK_THROWS_AS(TimeZone::load("/etc/passwd"), CalendarError);
    CHECK_THROWS_AS(TimeZone::load(""), CalendarError);
}
