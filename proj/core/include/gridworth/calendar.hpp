#pragma once

#include <chrono>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gridworth/time.hpp"
#include "gridworth/timeseries.hpp"
#include "gridworth/timezone.hpp"

namespace gridworth {

/// Heavy-load vs light-load hour under the BPA-style tariff rule.
enum class HourClass { HLH, LLH };

struct MonthHours {
    int hlh = 0;
    int llh = 0;
    int total() const { return hlh + llh; }
};

/// Classifies hours as HLH or LLH: HLH are hour-beginning 06..21 local time,
/// excluding Sundays and the six NERC holidays (New Year's Day, Memorial Day,
/// Independence Day, Labor Day, Thanksgiving Day, Christmas Day). Holidays are
/// taken on their actual calendar date; no observed-date shifting. All other
/// hours, including the fall-back repeated hour, are LLH.
class TariffCalendar {
public:
    struct Options {
        std::string timezone = "America/Los_Angeles";
        // Extra whole local dates treated as excluded (forced LLH), e.g. for
        // what-if runs or testing.
        std::vector<std::chrono::year_month_day> extra_exclusions;
    };

    static constexpr int hlh_first_hour = 6;  // hour-beginning, inclusive
    static constexpr int hlh_last_hour = 21;  // hour-beginning, inclusive

    TariffCalendar() : TariffCalendar(Options{}) {}
    explicit TariffCalendar(Options options);

    HourClass classify_hour(Instant hour_start) const;

    /// HLH/LLH counts over all local clock hours of the month. Totals reflect
    /// DST transitions (743 or 745 hours where applicable).
    MonthHours hours_in_month(int year, int month) const;

    /// Partition samples by the class of their containing clock hour,
    /// preserving order. Returns (hlh, llh).
    std::pair<PowerSeries, PowerSeries> classify_series(const PowerSeries& power) const;

    /// True for the six NERC holidays and any configured extra exclusion.
    bool is_excluded_date(std::chrono::year_month_day date) const;

    LocalTime to_local(Instant t) const { return zone_.to_local(t); }
    std::chrono::year_month_day local_date(Instant t) const;
    int local_hour_of_day(Instant t) const;
    /// (local year, local month 1..12)
    std::pair<int, int> local_year_month(Instant t) const;

    const TimeZone& zone() const { return zone_; }

private:
    TimeZone zone_;
    std::unordered_set<std::int32_t> extra_exclusions_; // encoded y*10000+m*100+d
};

/// The six NERC holidays of a year, actual calendar dates.
std::vector<std::chrono::year_month_day> nerc_holidays(int year);

} // namespace gridworth
