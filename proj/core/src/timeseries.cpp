#include "gridworth/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "gridworth/errors.hpp"

namespace gridworth {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

// Splits a two-column CSV line; rejects extra columns.
std::pair<std::string_view, std::string_view> split2(std::string_view line, std::size_t lineno) {
    const auto comma = line.find(',');
    if (comma == std::string_view::npos)
        throw ParseError(lineno, "expected two comma-separated fields");
    std::string_view a = trim(line.substr(0, comma));
    std::string_view b = line.substr(comma + 1);
    if (b.find(',') != std::string_view::npos)
        throw ParseError(lineno, "expected two comma-separated fields");
    return {a, trim(b)};
}

double parse_number(std::string_view field, std::size_t lineno, const char* what) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(lineno, std::string("invalid ") + what + " '" + std::string(field) + "'");
    if (!std::isfinite(value))
        throw ParseError(lineno, std::string(what) + " is not finite");
    return value;
}

void expect_header(std::istream& in, std::string_view expected) {
    std::string line;
    if (!std::getline(in, line))
        throw ParseError(1, "empty input, expected header '" + std::string(expected) + "'");
    if (trim(line) != expected)
        throw ParseError(1, "expected header '" + std::string(expected) + "'");
}

Instant parse_timestamp_field(std::string_view field, std::size_t lineno) {
    try {
        return parse_rfc3339_utc(field);
    } catch (const ParseError& e) {
        throw ParseError(lineno, e.cause().empty() ? e.what() : e.cause());
    }
}

Instant snap_to_interval(Instant t) {
    using std::chrono::seconds;
    const auto step = IntervalSeries::interval.count();
    const auto sec = t.time_since_epoch().count();
    auto snapped = (sec >= 0 ? (sec + step / 2) / step : (sec - step / 2 + 1) / step) * step;
    return Instant{seconds{snapped}};
}

// Shortest representation that parses back to the same double.
void append_number(std::string& out, double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    out.append(buf, ptr);
}

} // namespace

std::size_t IntervalSeries::expected_slots() const {
    if (samples.empty())
        return 0;
    const auto span = samples.back().timestamp - samples.front().timestamp;
    return static_cast<std::size_t>(span / interval) + 1;
}

IntervalSeries parse_interval_csv(std::istream& in, std::string meter_id, ParseStats* stats) {
    expect_header(in, "timestamp_utc,energy_wh");

    IntervalSeries series;
    series.meter_id = std::move(meter_id);
    ParseStats local;

    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto [ts_field, energy_field] = split2(line, lineno);
        const Instant ts = snap_to_interval(parse_timestamp_field(ts_field, lineno));
        const double energy = parse_number(energy_field, lineno, "energy_wh");
        if (energy < 0.0)
            throw ParseError(lineno, "negative energy (" + std::string(energy_field) + ")");
        ++local.rows;
        series.samples.push_back({ts, energy});
    }

    std::stable_sort(series.samples.begin(), series.samples.end(),
                     [](const IntervalSample& a, const IntervalSample& b) {
                         return a.timestamp < b.timestamp;
                     });

    // Collapse equal-value duplicates; conflicting values are a hard error.
    std::vector<IntervalSample> kept;
    kept.reserve(series.samples.size());
    for (const IntervalSample& s : series.samples) {
        if (!kept.empty() && kept.back().timestamp == s.timestamp) {
            if (kept.back().energy_wh != s.energy_wh)
                throw ParseError("conflicting duplicate readings at " +
                                 format_rfc3339_utc(s.timestamp));
            ++local.duplicates_collapsed;
            continue;
        }
        kept.push_back(s);
    }
    series.samples = std::move(kept);

    local.samples = series.samples.size();
    local.gaps = series.gap_count();
    if (stats)
        *stats = local;
    return series;
}

void write_interval_csv(std::ostream& out, const IntervalSeries& series) {
    std::string buf = "timestamp_utc,energy_wh\n";
    for (const IntervalSample& s : series.samples) {
        buf += format_rfc3339_utc(s.timestamp);
        buf += ',';
        append_number(buf, s.energy_wh);
        buf += '\n';
    }
    out << buf;
}

std::vector<MetSample> parse_met_csv(std::istream& in, ParseStats* stats) {
    expect_header(in, "timestamp_utc,wind_speed_mps");

    std::vector<MetSample> met;
    ParseStats local;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto [ts_field, speed_field] = split2(line, lineno);
        const Instant ts = parse_timestamp_field(ts_field, lineno);
        const double speed = parse_number(speed_field, lineno, "wind_speed_mps");
        if (speed < 0.0)
            throw ParseError(lineno, "negative wind speed");
        ++local.rows;
        met.push_back({ts, speed});
    }
    std::stable_sort(met.begin(), met.end(), [](const MetSample& a, const MetSample& b) {
        return a.timestamp < b.timestamp;
    });
    local.samples = met.size();
    if (stats)
        *stats = local;
    return met;
}

std::vector<HourlyLoad> parse_hourly_load_csv(std::istream& in, ParseStats* stats) {
    expect_header(in, "hour_start_utc,mean_kw");

    std::vector<HourlyLoad> loads;
    ParseStats local;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto [ts_field, kw_field] = split2(line, lineno);
        const Instant ts = parse_timestamp_field(ts_field, lineno);
        const double kw = parse_number(kw_field, lineno, "mean_kw");
        ++local.rows;
        loads.push_back({ts, kw});
    }
    std::stable_sort(loads.begin(), loads.end(), [](const HourlyLoad& a, const HourlyLoad& b) {
        return a.hour_start < b.hour_start;
    });
    local.samples = loads.size();
    if (stats)
        *stats = local;
    return loads;
}

PowerSeries to_average_power(const IntervalSeries& series) {
    PowerSeries power;
    power.meter_id = series.meter_id;
    power.samples.reserve(series.samples.size());
    for (const IntervalSample& s : series.samples)
        power.samples.push_back({s.timestamp, s.energy_wh * 12.0 / 1000.0});
    return power;
}

std::vector<PairedSample> align_with_met(const PowerSeries& power, std::span<const MetSample> met,
                                         std::chrono::seconds tolerance, AlignStats* stats) {
    if (tolerance < std::chrono::seconds{0})
        throw std::invalid_argument("alignment tolerance must be non-negative");
    if (!std::is_sorted(met.begin(), met.end(),
                        [](const MetSample& a, const MetSample& b) { return a.timestamp < b.timestamp; }))
        throw std::invalid_argument("met samples must be sorted by timestamp");

    std::vector<PairedSample> pairs;
    std::vector<bool> met_used(met.size(), false);
    AlignStats local;

    for (const PowerSample& p : power.samples) {
        // Candidates: first met >= p and its predecessor; ties go to the earlier one.
        auto it = std::lower_bound(met.begin(), met.end(), p.timestamp,
                                   [](const MetSample& m, Instant t) { return m.timestamp < t; });
        const MetSample* best = nullptr;
        std::chrono::seconds best_dist{0};
        auto consider = [&](std::span<const MetSample>::iterator cand) {
            if (cand == met.end())
                return;
            const auto dist = cand->timestamp >= p.timestamp ? cand->timestamp - p.timestamp
                                                             : p.timestamp - cand->timestamp;
            if (dist > tolerance)
                return;
            if (!best || dist < best_dist ||
                (dist == best_dist && cand->timestamp < best->timestamp)) {
                best = &*cand;
                best_dist = dist;
            }
        };
        if (it != met.begin())
            consider(std::prev(it));
        consider(it);

        if (best) {
            pairs.push_back({p.timestamp, p.power_kw, best->wind_speed_mps});
            met_used[static_cast<std::size_t>(best - met.data())] = true;
            ++local.matched;
        } else {
            ++local.unmatched_power;
        }
    }

    local.unmatched_met =
        static_cast<std::size_t>(std::count(met_used.begin(), met_used.end(), false));
    if (stats)
        *stats = local;
    return pairs;
}

std::vector<HourlyMean> aggregate_hourly(const PowerSeries& power, double min_coverage) {
    if (!(min_coverage > 0.0 && min_coverage <= 1.0))
        throw std::invalid_argument("min_coverage must be in (0, 1]");

    constexpr int slots_per_hour = 12;
    std::vector<HourlyMean> hours;
    std::size_t i = 0;
    while (i < power.samples.size()) {
        const Instant hour = std::chrono::floor<std::chrono::hours>(power.samples[i].timestamp);
        double sum = 0.0;
        int n = 0;
        while (i < power.samples.size() &&
               std::chrono::floor<std::chrono::hours>(power.samples[i].timestamp) == hour) {
            sum += power.samples[i].power_kw;
            ++n;
            ++i;
        }
        if (static_cast<double>(n) / slots_per_hour >= min_coverage)
            hours.push_back({hour, sum / n, n});
    }
    return hours;
}

} // namespace gridworth
