#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "gridworth/calendar.hpp"

namespace gridworth {

/// Energy and demand prices for one calendar month.
struct MonthRates {
    int month = 0; // 1..12
    double hlh_energy_rate_usd_per_mwh = 0.0;
    double llh_energy_rate_usd_per_mwh = 0.0;
    double demand_rate_usd_per_kw = 0.0;
};

/// Complete 12-month load-shaping and demand rate schedule plus the utility's
/// grandfathered demand amount. Immutable after loading.
struct RateSchedule {
    std::string schedule_id;
    std::array<MonthRates, 12> months{}; // months[i].month == i + 1
    double grandfather_kw = 0.0;

    double energy_rate_usd_per_mwh(int month, HourClass cls) const {
        const MonthRates& r = at(month);
        return cls == HourClass::HLH ? r.hlh_energy_rate_usd_per_mwh
                                     : r.llh_energy_rate_usd_per_mwh;
    }
    double demand_rate_usd_per_kw(int month) const { return at(month).demand_rate_usd_per_kw; }

    const MonthRates& at(int month) const;
};

/// Load and validate a schedule from JSON:
///   { "schedule_id": "...", "grandfather_kw": <kw>,
///     "months": [ { "month": 1..12,
///                   "hlh_energy_rate_usd_per_mwh": <rate>,
///                   "llh_energy_rate_usd_per_mwh": <rate>,
///                   "demand_rate_usd_per_kw": <rate> }, x12 ] }
/// Throws ScheduleError on missing/duplicate months or negative rates.
RateSchedule load_rate_schedule(std::istream& in);
RateSchedule load_rate_schedule_file(const std::filesystem::path& path);

/// Serialize back to the documented JSON shape (round-trip preserving).
void write_rate_schedule(std::ostream& out, const RateSchedule& schedule);

} // namespace gridworth
