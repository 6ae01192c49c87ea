#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "gridworth/calendar.hpp"
#include "gridworth/rates.hpp"
#include "gridworth/timeseries.hpp"
#include "gridworth/valuation.hpp"

namespace gridworth {

/// Inputs for one month's demand billing determinant: the utility's hourly
/// HLH purchases and its grandfathered amount.
struct DeterminantInput {
    std::vector<HourlyLoad> hlh_loads;
    double grandfather_kw = 0.0;
};

/// max(purchased) - mean(purchased) - grandfather. Demand charges apply only
/// when the result is positive. Throws std::invalid_argument on empty input.
double billing_determinant(const DeterminantInput& input);

struct DeterminantAssessment {
    double determinant_kw = 0.0;
    bool charged = false;   // determinant > 0
    bool near_zero = false; // |determinant| <= band: differential analysis is unreliable
};

/// Determinant plus the flags used to decide whether the differential method
/// is trustworthy for the month.
DeterminantAssessment assess_determinant(const DeterminantInput& input, double near_zero_band_kw);

/// Utility's historical monthly peak hours (one entry per billed month).
struct PeakHourRecord {
    struct Entry {
        int key_year = 0;  // the "YYYY-MM" month key as recorded by the utility
        int key_month = 0;
        Instant peak_hour_start;
    };
    std::vector<Entry> entries; // sorted by peak_hour_start

    /// Keep only the most recent `n` entries (typically 24 = two years).
    PeakHourRecord most_recent(std::size_t n) const;
};

/// Peak-hour history CSV: header "month,peak_hour_start_utc",
/// e.g. "2013-07,2013-07-02T17:00:00Z".
PeakHourRecord parse_peak_history_csv(std::istream& in, ParseStats* stats = nullptr);

/// Change in one month's demand-charge terms attributable to a generator.
struct DemandDelta {
    int calendar_month = 0;
    double delta_peak_kw = 0.0;              // mean generation at historical peak hours
    std::optional<double> delta_peak_sd_kw;  // spread across those observations
    double delta_ahlh_kw = 0.0;              // mean generation over all HLH samples
    double delta_expense_usd = 0.0;          // (delta_ahlh - delta_peak) * demand rate
    std::optional<double> delta_expense_sd_usd;
    int n_peak_observations = 0;
    int n_peak_dropped = 0; // peak hours without generation data (dropped, not zeroed)
};

/// Estimate the month's demand-charge impact. Peak hours contribute to the
/// calendar month their LOCAL date falls in. Generation at a peak hour is the
/// coverage-gated hourly mean (see aggregate_hourly); peak hours without
/// enough data are dropped, never zeroed. A positive result is an expense
/// increase (generation lowers the monthly HLH average more than the peak).
/// Throws InsufficientHistoryError when the record has no usable peak hours
/// for the month, NoDataError when the generator has no HLH samples there.
DemandDelta demand_delta(const PowerSeries& generation, const PeakHourRecord& peaks,
                         const TariffCalendar& calendar, const RateSchedule& schedule,
                         int calendar_month, double min_hour_coverage = 0.5);

struct AnnualDemandImpact {
    double expense_usd = 0.0;
    std::optional<double> err_usd;
    int months_covered = 0;
    ErrorMode error_mode = ErrorMode::Quadrature;
};

/// Sum monthly expense deltas; at most one per calendar month.
AnnualDemandImpact annual_demand_impact(std::span<const DemandDelta> deltas,
                                        ErrorMode mode = ErrorMode::Quadrature);

} // namespace gridworth
