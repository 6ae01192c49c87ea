#pragma once

#include <array>
#include <optional>
#include <span>

#include "gridworth/calendar.hpp"
#include "gridworth/timeseries.hpp"

namespace gridworth {

/// One wind-speed bin of a power curve: mean power plus the 16th..84th
/// percentile band (nearest-rank, no interpolation). Empty bins are omitted.
/// The mean may leave the band for skewed bins; p16 <= p84 always holds.
struct PowerCurveBin {
    double speed_center_mps = 0.0;
    double mean_kw = 0.0;
    double p16_kw = 0.0;
    double p84_kw = 0.0;
    std::size_t sample_count = 0;
};

struct PowerCurve {
    double bin_width_mps = 1.0;
    std::vector<PowerCurveBin> bins; // sorted by speed_center_mps
};

/// Bin paired samples by wind speed (assignment by rounding speed/bin_width,
/// so bin centers sit at integer multiples of the width) and summarize power
/// per bin. Empty input yields an empty curve.
PowerCurve power_curve(std::span<const PairedSample> pairs, double bin_width_mps = 1.0);

/// Capacity factor in percent: annual_energy / (nameplate * 8760 h) * 100.
/// 8760 hours regardless of leap year. Throws on non-positive nameplate.
double capacity_factor_percent(double annual_energy_kwh, double nameplate_kw);

/// Mean generation by local hour of day for one calendar month, pooled across
/// days and years; per-hour standard error across daily means when a slot was
/// observed on two or more days.
struct DiurnalProfile {
    struct HourStat {
        double mean_kw = 0.0;
        std::optional<double> se_kw;
        std::size_t sample_count = 0;
    };
    int calendar_month = 0;
    std::array<HourStat, 24> per_hour{};
};

/// Throws NoDataError when the series has no samples in that month.
DiurnalProfile diurnal_profile(const PowerSeries& power, const TariffCalendar& calendar,
                               int calendar_month);

struct ExceedanceStats {
    double max_kw = 0.0;
    double fraction_above = 0.0; // samples strictly above nameplate
    std::size_t sample_count = 0;
};

/// Maximum observed power and how often output exceeded the nameplate rating.
/// Throws std::invalid_argument on empty input or non-positive nameplate.
ExceedanceStats nameplate_exceedance(const PowerSeries& power, double nameplate_kw);

} // namespace gridworth
