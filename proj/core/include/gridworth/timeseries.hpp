#pragma once

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gridworth/time.hpp"

namespace gridworth {

/// One metered 5-minute interval: energy generated (or consumed) in watt-hours
/// over [timestamp, timestamp + 5 min).
struct IntervalSample {
    Instant timestamp;
    double energy_wh = 0.0; // >= 0, quantized at the source's resolution
};

/// Ordered, de-duplicated 5-minute interval readings from one meter.
/// Missing intervals are simply absent; they are never zero-filled.
struct IntervalSeries {
    static constexpr std::chrono::seconds interval{300};

    std::string meter_id;
    std::vector<IntervalSample> samples; // strictly increasing timestamps

    bool empty() const { return samples.empty(); }

    /// Number of 5-minute slots in the covered span (first..last inclusive).
    std::size_t expected_slots() const;

    /// Missing slots within the covered span.
    std::size_t gap_count() const {
        return empty() ? 0 : expected_slots() - samples.size();
    }
};

struct PowerSample {
    Instant timestamp;
    double power_kw = 0.0;
};

/// Average-power samples derived from an IntervalSeries (one per interval).
struct PowerSeries {
    std::string meter_id;
    std::vector<PowerSample> samples;

    bool empty() const { return samples.empty(); }
};

/// Wind-speed reading from the metrology tower.
struct MetSample {
    Instant timestamp;
    double wind_speed_mps = 0.0;
};

/// Power and wind speed joined onto a single timestamp.
struct PairedSample {
    Instant timestamp;
    double power_kw = 0.0;
    double wind_speed_mps = 0.0;
};

/// Hourly utility purchase (or any hourly mean-power record).
struct HourlyLoad {
    Instant hour_start;
    double mean_kw = 0.0;
};

struct ParseStats {
    std::size_t rows = 0;                  // data rows read
    std::size_t samples = 0;               // samples kept
    std::size_t gaps = 0;                  // missing slots in the covered span
    std::size_t duplicates_collapsed = 0;  // equal-value duplicate rows dropped
};

/// Parse the generation/load interval CSV (header "timestamp_utc,energy_wh",
/// RFC 3339 UTC timestamps, one row per 5-minute interval).
/// Timestamps are snapped to the nearest 5-minute boundary. Duplicate
/// timestamps with equal energy collapse silently; conflicting values are an
/// error, as is negative energy. Throws ParseError with the offending line.
IntervalSeries parse_interval_csv(std::istream& in, std::string meter_id,
                                  ParseStats* stats = nullptr);

/// Inverse of parse_interval_csv: emits the documented CSV such that
/// re-parsing yields an identical series.
void write_interval_csv(std::ostream& out, const IntervalSeries& series);

/// Met CSV: header "timestamp_utc,wind_speed_mps". Result sorted by timestamp.
std::vector<MetSample> parse_met_csv(std::istream& in, ParseStats* stats = nullptr);

/// Hourly load CSV: header "hour_start_utc,mean_kw". Result sorted.
std::vector<HourlyLoad> parse_hourly_load_csv(std::istream& in, ParseStats* stats = nullptr);

/// Convert 5-minute interval energy to average power:
/// power_kw = energy_wh * 12 / 1000. Gaps propagate as absent samples.
PowerSeries to_average_power(const IntervalSeries& series);

struct AlignStats {
    std::size_t matched = 0;
    std::size_t unmatched_power = 0;
    std::size_t unmatched_met = 0;
};

/// Inner join of power samples with met samples: each power sample pairs with
/// the nearest met sample within `tolerance` (ties break toward the earlier
/// met sample). Unmatched samples on either side are dropped and counted.
/// Both inputs must be sorted by timestamp.
std::vector<PairedSample> align_with_met(const PowerSeries& power,
                                         std::span<const MetSample> met,
                                         std::chrono::seconds tolerance = std::chrono::seconds{150},
                                         AlignStats* stats = nullptr);

struct HourlyMean {
    Instant hour_start;
    double mean_kw = 0.0;
    int samples_present = 0; // of the 12 possible 5-minute slots
};

/// Mean of available 5-minute samples per clock hour. An hour is emitted only
/// when at least `min_coverage` of its 12 slots are present.
std::vector<HourlyMean> aggregate_hourly(const PowerSeries& power, double min_coverage = 0.5);

} // namespace gridworth
