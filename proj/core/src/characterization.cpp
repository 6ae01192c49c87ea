#include "gridworth/characterization.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "gridworth/errors.hpp"
#include "gridworth/stats.hpp"

namespace gridworth {

PowerCurve power_curve(std::span<const PairedSample> pairs, double bin_width_mps) {
    if (!(bin_width_mps > 0.0))
        throw std::invalid_argument("bin width must be positive");

    std::map<long long, std::vector<double>> by_bin;
    for (const PairedSample& p : pairs)
        by_bin[std::llround(p.wind_speed_mps / bin_width_mps)].push_back(p.power_kw);

    PowerCurve curve;
    curve.bin_width_mps = bin_width_mps;
    curve.bins.reserve(by_bin.size());
    for (auto& [index, powers] : by_bin) {
        PowerCurveBin bin;
        bin.speed_center_mps = static_cast<double>(index) * bin_width_mps;
        bin.sample_count = powers.size();
        bin.mean_kw = mean(powers);
        bin.p16_kw = nearest_rank_percentile(powers, 16.0);
        bin.p84_kw = nearest_rank_percentile(std::move(powers), 84.0);
        curve.bins.push_back(bin);
    }
    return curve;
}

double capacity_factor_percent(double annual_energy_kwh, double nameplate_kw) {
    if (!(nameplate_kw > 0.0))
        throw std::invalid_argument("nameplate must be positive");
    constexpr double hours_per_year = 8760.0;
    return annual_energy_kwh / (nameplate_kw * hours_per_year) * 100.0;
}

DiurnalProfile diurnal_profile(const PowerSeries& power, const TariffCalendar& calendar,
                               int calendar_month) {
    if (calendar_month < 1 || calendar_month > 12)
        throw std::invalid_argument("calendar_month out of range");

    struct HourPool {
        double sum = 0.0;
        std::size_t count = 0;
        std::map<std::int32_t, std::pair<double, std::size_t>> per_day; // encoded local date
    };
    std::array<HourPool, 24> pools{};
    bool any = false;

    for (const PowerSample& s : power.samples) {
        const auto [year, month] = calendar.local_year_month(s.timestamp);
        if (month != calendar_month)
            continue;
        any = true;
        const auto date = calendar.local_date(s.timestamp);
        const std::int32_t day_key = int(date.year()) * 10000 +
                                     int(unsigned(date.month())) * 100 + int(unsigned(date.day()));
        const int hour = calendar.local_hour_of_day(s.timestamp);
        HourPool& pool = pools[static_cast<std::size_t>(hour)];
        pool.sum += s.power_kw;
        ++pool.count;
        auto& [dsum, dcount] = pool.per_day[day_key];
        dsum += s.power_kw;
        ++dcount;
    }
    if (!any)
        throw NoDataError("no samples for month " + std::to_string(calendar_month));

    DiurnalProfile profile;
    profile.calendar_month = calendar_month;
    for (int h = 0; h < 24; ++h) {
        const HourPool& pool = pools[static_cast<std::size_t>(h)];
        auto& stat = profile.per_hour[static_cast<std::size_t>(h)];
        stat.sample_count = pool.count;
        if (pool.count == 0)
            continue;
        stat.mean_kw = pool.sum / static_cast<double>(pool.count);
        std::vector<double> daily_means;
        daily_means.reserve(pool.per_day.size());
        for (const auto& [day, acc] : pool.per_day)
            daily_means.push_back(acc.first / static_cast<double>(acc.second));
        stat.se_kw = standard_error(daily_means);
    }
    return profile;
}

ExceedanceStats nameplate_exceedance(const PowerSeries& power, double nameplate_kw) {
    if (!(nameplate_kw > 0.0))
        throw std::invalid_argument("nameplate must be positive");
    if (power.empty())
        throw std::invalid_argument("nameplate_exceedance needs a non-empty series");

    ExceedanceStats stats;
    stats.sample_count = power.samples.size();
    std::size_t above = 0;
    stats.max_kw = power.samples.front().power_kw;
    for (const PowerSample& s : power.samples) {
        stats.max_kw = std::max(stats.max_kw, s.power_kw);
        if (s.power_kw > nameplate_kw)
            ++above;
    }
    stats.fraction_above = static_cast<double>(above) / static_cast<double>(stats.sample_count);
    return stats;
}

} // namespace gridworth
