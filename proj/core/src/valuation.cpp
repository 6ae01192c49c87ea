#include "gridworth/valuation.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "gridworth/errors.hpp"
#include "gridworth/stats.hpp"

namespace gridworth {

namespace {

struct ClassPool {
    double sum = 0.0;
    std::size_t count = 0;
    std::map<int, std::pair<double, std::size_t>> per_year; // year -> (sum, count)

    void add(int year, double power_kw) {
        sum += power_kw;
        ++count;
        auto& [ysum, ycount] = per_year[year];
        ysum += power_kw;
        ++ycount;
    }
    double pooled_mean() const { return count == 0 ? 0.0 : sum / static_cast<double>(count); }
    std::optional<double> instance_se() const {
        std::vector<double> means;
        means.reserve(per_year.size());
        for (const auto& [year, acc] : per_year)
            means.push_back(acc.first / static_cast<double>(acc.second));
        return standard_error(means);
    }
};

std::optional<double> quadrature_sum(std::optional<double> a, std::optional<double> b) {
    if (!a && !b)
        return std::nullopt;
    const double x = a.value_or(0.0);
    const double y = b.value_or(0.0);
    return std::sqrt(x * x + y * y);
}

std::optional<double> scaled(std::optional<double> se, double factor) {
    if (!se)
        return std::nullopt;
    return *se * factor;
}

} // namespace

std::optional<MonthlyEstimate> monthly_estimate(const PowerSeries& power,
                                                const TariffCalendar& calendar,
                                                int calendar_month, int reference_year) {
    if (calendar_month < 1 || calendar_month > 12)
        throw std::invalid_argument("calendar_month out of range");

    ClassPool hlh, llh;
    std::map<int, bool> years_seen;
    for (const PowerSample& s : power.samples) {
        const auto [year, month] = calendar.local_year_month(s.timestamp);
        if (month != calendar_month)
            continue;
        years_seen[year] = true;
        if (calendar.classify_hour(s.timestamp) == HourClass::HLH)
            hlh.add(year, s.power_kw);
        else
            llh.add(year, s.power_kw);
    }
    if (hlh.count == 0 && llh.count == 0)
        return std::nullopt;

    const MonthHours hours = calendar.hours_in_month(reference_year, calendar_month);

    MonthlyEstimate est;
    est.calendar_month = calendar_month;
    est.n_month_instances = static_cast<int>(years_seen.size());
    est.n_hlh_samples = hlh.count;
    est.n_llh_samples = llh.count;

    est.mean_power_hlh_kw = hlh.pooled_mean();
    est.se_power_hlh_kw = hlh.instance_se();
    est.mean_power_llh_kw = llh.pooled_mean();
    est.se_power_llh_kw = llh.instance_se();

    est.energy_hlh_kwh = est.mean_power_hlh_kw * hours.hlh;
    est.energy_hlh_se_kwh = scaled(est.se_power_hlh_kw, hours.hlh);
    est.energy_llh_kwh = est.mean_power_llh_kw * hours.llh;
    est.energy_llh_se_kwh = scaled(est.se_power_llh_kw, hours.llh);
    est.energy_total_kwh = est.energy_hlh_kwh + est.energy_llh_kwh;
    est.energy_total_se_kwh = quadrature_sum(est.energy_hlh_se_kwh, est.energy_llh_se_kwh);
    return est;
}

ValueWithError monthly_value(const MonthlyEstimate& est, const RateSchedule& schedule) {
    const double r_hlh = schedule.energy_rate_usd_per_mwh(est.calendar_month, HourClass::HLH);
    const double r_llh = schedule.energy_rate_usd_per_mwh(est.calendar_month, HourClass::LLH);

    ValueWithError value;
    value.usd = est.energy_hlh_kwh / 1000.0 * r_hlh + est.energy_llh_kwh / 1000.0 * r_llh;
    value.se_usd = quadrature_sum(scaled(est.energy_hlh_se_kwh, r_hlh / 1000.0),
                                  scaled(est.energy_llh_se_kwh, r_llh / 1000.0));
    return value;
}

MonthlyEstimate with_value(MonthlyEstimate est, const RateSchedule& schedule) {
    const ValueWithError v = monthly_value(est, schedule);
    est.value_usd = v.usd;
    est.value_se_usd = v.se_usd;
    return est;
}

AnnualEstimate annualize(std::span<const MonthlyEstimate> estimates, ErrorMode mode) {
    std::array<bool, 12> seen{};
    AnnualEstimate year;
    year.error_mode = mode;

    double energy_lin = 0.0, energy_quad = 0.0;
    double value_lin = 0.0, value_quad = 0.0;
    bool any_energy_se = false, any_value_se = false;

    for (const MonthlyEstimate& est : estimates) {
        if (est.calendar_month < 1 || est.calendar_month > 12)
            throw std::invalid_argument("calendar_month out of range");
        auto& flag = seen[static_cast<std::size_t>(est.calendar_month - 1)];
        if (flag)
            throw std::invalid_argument("duplicate calendar month " +
                                        std::to_string(est.calendar_month));
        flag = true;

        year.energy_total_kwh += est.energy_total_kwh;
        year.value_total_usd += est.value_usd;
        if (est.energy_total_se_kwh) {
            any_energy_se = true;
            energy_lin += *est.energy_total_se_kwh;
            energy_quad += *est.energy_total_se_kwh * *est.energy_total_se_kwh;
        }
        if (est.value_se_usd) {
            any_value_se = true;
            value_lin += *est.value_se_usd;
            value_quad += *est.value_se_usd * *est.value_se_usd;
        }
        ++year.months_covered;
    }

    if (any_energy_se) {
        year.energy_err_linear_kwh = energy_lin;
        year.energy_err_quadrature_kwh = std::sqrt(energy_quad);
    }
    if (any_value_se) {
        year.value_err_linear_usd = value_lin;
        year.value_err_quadrature_usd = std::sqrt(value_quad);
    }
    year.extrapolated = year.months_covered < 12;
    return year;
}

AnnualEstimate annual_extrapolation(std::span<const MonthlyEstimate> estimates, ErrorMode mode) {
    if (estimates.empty())
        throw NoDataError("extrapolation needs at least one monthly estimate");
    AnnualEstimate year = annualize(estimates, mode);
    year.extrapolated = true;
    return year;
}

} // namespace gridworth
