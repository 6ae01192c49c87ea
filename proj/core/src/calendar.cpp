#include "gridworth/calendar.hpp"

#include "gridworth/errors.hpp"

namespace gridworth {

namespace {

using namespace std::chrono;

std::int32_t encode_date(year_month_day d) {
    return int(d.year()) * 10000 + int(unsigned(d.month())) * 100 + int(unsigned(d.day()));
}

year_month_day nth_weekday(int y, unsigned m, weekday wd, unsigned nth) {
    return year_month_day{year_month_weekday{year{y}, month{m}, weekday_indexed{wd, nth}}};
}

year_month_day last_weekday(int y, unsigned m, weekday wd) {
    return year_month_day{year_month_weekday_last{year{y}, month{m}, weekday_last{wd}}};
}

} // namespace

std::vector<year_month_day> nerc_holidays(int y) {
    return {
        year_month_day{year{y}, month{1}, day{1}},    // New Year's Day
        last_weekday(y, 5, Monday),                   // Memorial Day
        year_month_day{year{y}, month{7}, day{4}},    // Independence Day
        nth_weekday(y, 9, Monday, 1),                 // Labor Day
        nth_weekday(y, 11, Thursday, 4),              // Thanksgiving Day
        year_month_day{year{y}, month{12}, day{25}},  // Christmas Day
    };
}

TariffCalendar::TariffCalendar(Options options) : zone_(TimeZone::load(options.timezone)) {
    for (const auto d : options.extra_exclusions) {
        if (!d.ok())
            throw CalendarError("invalid exclusion date");
        extra_exclusions_.insert(encode_date(d));
    }
}

year_month_day TariffCalendar::local_date(Instant t) const {
    return year_month_day{floor<days>(zone_.to_local(t))};
}

int TariffCalendar::local_hour_of_day(Instant t) const {
    const LocalTime lt = zone_.to_local(t);
    return static_cast<int>(duration_cast<hours>(lt - floor<days>(lt)).count());
}

std::pair<int, int> TariffCalendar::local_year_month(Instant t) const {
    const year_month_day d = local_date(t);
    return {int(d.year()), int(unsigned(d.month()))};
}

bool TariffCalendar::is_excluded_date(year_month_day date) const {
    if (extra_exclusions_.count(encode_date(date)) != 0)
        return true;
    const int y = int(date.year());
    const unsigned m = unsigned(date.month());
    const unsigned d = unsigned(date.day());
    switch (m) {
    case 1:
        return d == 1;
    case 5:
        return date == last_weekday(y, 5, Monday);
    case 7:
        return d == 4;
    case 9:
        return date == nth_weekday(y, 9, Monday, 1);
    case 11:
        return date == nth_weekday(y, 11, Thursday, 4);
    case 12:
        return d == 25;
    default:
        return false;
    }
}

HourClass TariffCalendar::classify_hour(Instant hour_start) const {
    const LocalTime lt = zone_.to_local(hour_start);
    const auto day_point = floor<days>(lt);
    const int hour = static_cast<int>(duration_cast<hours>(lt - day_point).count());
    if (hour < hlh_first_hour || hour > hlh_last_hour)
        return HourClass::LLH;
    const year_month_day date{day_point};
    if (weekday{day_point} == Sunday)
        return HourClass::LLH;
    if (is_excluded_date(date))
        return HourClass::LLH;
    return HourClass::HLH;
}

MonthHours TariffCalendar::hours_in_month(int y, int m) const {
    if (m < 1 || m > 12)
        throw CalendarError("month out of range: " + std::to_string(m));

    // Sweep UTC hour starts over a superset of the local month and keep the
    // ones whose local time falls inside it. This sidesteps local->UTC
    // conversion entirely, so DST gaps/repeats need no special casing.
    const sys_days month_start{year{y} / m / 1};
    const sys_days month_end{(year{y} / m / 1) + months{1}};
    const Instant begin = Instant{month_start} - hours{36};
    const Instant end = Instant{month_end} + hours{36};

    MonthHours counts;
    for (Instant t = begin; t < end; t += hours{1}) {
        const auto [ly, lm] = local_year_month(t);
        if (ly != y || lm != m)
            continue;
        if (classify_hour(t) == HourClass::HLH)
            ++counts.hlh;
        else
            ++counts.llh;
    }
    return counts;
}

std::pair<PowerSeries, PowerSeries> TariffCalendar::classify_series(const PowerSeries& power) const {
    PowerSeries hlh, llh;
    hlh.meter_id = power.meter_id;
    llh.meter_id = power.meter_id;
    for (const PowerSample& s : power.samples) {
        if (classify_hour(s.timestamp) == HourClass::HLH)
            hlh.samples.push_back(s);
        else
            llh.samples.push_back(s);
    }
    return {std::move(hlh), std::move(llh)};
}

} // namespace gridworth
