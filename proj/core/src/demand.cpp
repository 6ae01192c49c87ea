#include "gridworth/demand.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <stdexcept>

#include "gridworth/errors.hpp"
#include "gridworth/stats.hpp"

namespace gridworth {

double billing_determinant(const DeterminantInput& input) {
    if (input.hlh_loads.empty())
        throw std::invalid_argument("billing determinant needs at least one hourly load");
    double max_kw = input.hlh_loads.front().mean_kw;
    double sum = 0.0;
    for (const HourlyLoad& h : input.hlh_loads) {
        max_kw = std::max(max_kw, h.mean_kw);
        sum += h.mean_kw;
    }
    const double mean_kw = sum / static_cast<double>(input.hlh_loads.size());
    return max_kw - mean_kw - input.grandfather_kw;
}

DeterminantAssessment assess_determinant(const DeterminantInput& input, double near_zero_band_kw) {
    if (near_zero_band_kw < 0.0)
        throw std::invalid_argument("near-zero band must be non-negative");
    DeterminantAssessment a;
    a.determinant_kw = billing_determinant(input);
    a.charged = a.determinant_kw > 0.0;
    a.near_zero = std::abs(a.determinant_kw) <= near_zero_band_kw;
    return a;
}

PeakHourRecord PeakHourRecord::most_recent(std::size_t n) const {
    PeakHourRecord out;
    if (entries.size() <= n) {
        out.entries = entries;
        return out;
    }
    out.entries.assign(entries.end() - static_cast<std::ptrdiff_t>(n), entries.end());
    return out;
}

PeakHourRecord parse_peak_history_csv(std::istream& in, ParseStats* stats) {
    std::string line;
    if (!std::getline(in, line))
        throw ParseError(1, "empty input, expected header 'month,peak_hour_start_utc'");
    auto strip = [](std::string s) {
        while (!s.empty() && (s.back() == '\r' || s.back() == ' '))
            s.pop_back();
        return s;
    };
    if (strip(line) != "month,peak_hour_start_utc")
        throw ParseError(1, "expected header 'month,peak_hour_start_utc'");

    PeakHourRecord record;
    ParseStats local;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string row = strip(line);
        if (row.empty())
            continue;
        const auto comma = row.find(',');
        if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos)
            throw ParseError(lineno, "expected two comma-separated fields");
        PeakHourRecord::Entry entry;
        try {
            const auto [y, m] = parse_year_month(row.substr(0, comma));
            entry.key_year = y;
            entry.key_month = m;
            entry.peak_hour_start = parse_rfc3339_utc(row.substr(comma + 1));
        } catch (const ParseError& e) {
            throw ParseError(lineno, e.cause().empty() ? e.what() : e.cause());
        }
        ++local.rows;
        record.entries.push_back(entry);
    }
    std::stable_sort(record.entries.begin(), record.entries.end(),
                     [](const PeakHourRecord::Entry& a, const PeakHourRecord::Entry& b) {
                         return a.peak_hour_start < b.peak_hour_start;
                     });
    local.samples = record.entries.size();
    if (stats)
        *stats = local;
    return record;
}

DemandDelta demand_delta(const PowerSeries& generation, const PeakHourRecord& peaks,
                         const TariffCalendar& calendar, const RateSchedule& schedule,
                         int calendar_month, double min_hour_coverage) {
    if (calendar_month < 1 || calendar_month > 12)
        throw std::invalid_argument("calendar_month out of range");

    DemandDelta delta;
    delta.calendar_month = calendar_month;

    const std::vector<HourlyMean> hourly = aggregate_hourly(generation, min_hour_coverage);
    const auto hourly_mean = [&hourly](Instant hour_start) -> std::optional<double> {
        const auto it = std::lower_bound(
            hourly.begin(), hourly.end(), hour_start,
            [](const HourlyMean& h, Instant t) { return h.hour_start < t; });
        if (it == hourly.end() || it->hour_start != hour_start)
            return std::nullopt;
        return it->mean_kw;
    };

    // Generation observed at the historical peak hours of this month.
    std::vector<double> peak_obs;
    int month_entries = 0;
    for (const PeakHourRecord::Entry& e : peaks.entries) {
        const auto [y, m] = calendar.local_year_month(e.peak_hour_start);
        if (m != calendar_month)
            continue;
        ++month_entries;
        if (const auto kw = hourly_mean(std::chrono::floor<std::chrono::hours>(e.peak_hour_start)))
            peak_obs.push_back(*kw);
        else
            ++delta.n_peak_dropped;
    }
    if (month_entries == 0)
        throw InsufficientHistoryError("no peak-hour history for month " +
                                       std::to_string(calendar_month));
    if (peak_obs.empty())
        throw InsufficientHistoryError("no generation data at any recorded peak hour of month " +
                                       std::to_string(calendar_month));
    delta.n_peak_observations = static_cast<int>(peak_obs.size());
    delta.delta_peak_kw = mean(peak_obs);
    if (peak_obs.size() >= 2)
        delta.delta_peak_sd_kw = sample_stddev(peak_obs);

    // Average generation over every HLH sample of the month, pooled across years.
    double hlh_sum = 0.0;
    std::size_t hlh_n = 0;
    for (const PowerSample& s : generation.samples) {
        const auto [y, m] = calendar.local_year_month(s.timestamp);
        if (m != calendar_month)
            continue;
        if (calendar.classify_hour(s.timestamp) == HourClass::HLH) {
            hlh_sum += s.power_kw;
            ++hlh_n;
        }
    }
    if (hlh_n == 0)
        throw NoDataError("no HLH generation samples for month " + std::to_string(calendar_month));
    delta.delta_ahlh_kw = hlh_sum / static_cast<double>(hlh_n);

    const double rate = schedule.demand_rate_usd_per_kw(calendar_month);
    delta.delta_expense_usd = (delta.delta_ahlh_kw - delta.delta_peak_kw) * rate;
    if (delta.delta_peak_sd_kw)
        delta.delta_expense_sd_usd = *delta.delta_peak_sd_kw * rate;
    return delta;
}

AnnualDemandImpact annual_demand_impact(std::span<const DemandDelta> deltas, ErrorMode mode) {
    std::array<bool, 12> seen{};
    AnnualDemandImpact impact;
    impact.error_mode = mode;

    double lin = 0.0, quad = 0.0;
    bool any_sd = false;
    for (const DemandDelta& d : deltas) {
        if (d.calendar_month < 1 || d.calendar_month > 12)
            throw std::invalid_argument("calendar_month out of range");
        auto& flag = seen[static_cast<std::size_t>(d.calendar_month - 1)];
        if (flag)
            throw std::invalid_argument("duplicate calendar month " +
                                        std::to_string(d.calendar_month));
        flag = true;
        impact.expense_usd += d.delta_expense_usd;
        if (d.delta_expense_sd_usd) {
            any_sd = true;
            lin += *d.delta_expense_sd_usd;
            quad += *d.delta_expense_sd_usd * *d.delta_expense_sd_usd;
        }
        ++impact.months_covered;
    }
    if (any_sd)
        impact.err_usd = mode == ErrorMode::Linear ? lin : std::sqrt(quad);
    return impact;
}

} // namespace gridworth
