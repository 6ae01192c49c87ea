#pragma once

#include <optional>
#include <span>

#include "gridworth/calendar.hpp"
#include "gridworth/rates.hpp"
#include "gridworth/timeseries.hpp"

namespace gridworth {

/// How per-month uncertainties combine into a yearly figure.
enum class ErrorMode { Linear, Quadrature };

/// Pooled-statistics estimate for one calendar month. Means pool every
/// 5-minute sample from every year's instance of the month; standard errors
/// are taken across the per-instance (per-year) means and are present only
/// when the month was observed in two or more years. Energy applies the
/// reference year's HLH/LLH hour counts to the pooled mean power.
struct MonthlyEstimate {
    int calendar_month = 0; // 1..12

    double mean_power_hlh_kw = 0.0;
    std::optional<double> se_power_hlh_kw;
    double mean_power_llh_kw = 0.0;
    std::optional<double> se_power_llh_kw;

    double energy_hlh_kwh = 0.0;
    std::optional<double> energy_hlh_se_kwh;
    double energy_llh_kwh = 0.0;
    std::optional<double> energy_llh_se_kwh;
    double energy_total_kwh = 0.0;
    std::optional<double> energy_total_se_kwh; // class errors combined in quadrature

    double value_usd = 0.0;
    std::optional<double> value_se_usd;

    int n_month_instances = 0; // distinct years with data for this month
    std::size_t n_hlh_samples = 0;
    std::size_t n_llh_samples = 0;
};

struct ValueWithError {
    double usd = 0.0;
    std::optional<double> se_usd;
};

/// Yearly totals over the available monthly estimates, with both error
/// aggregations. No scaling is applied for missing months; `extrapolated`
/// marks totals that presume "missing months would have looked the same".
struct AnnualEstimate {
    double energy_total_kwh = 0.0;
    std::optional<double> energy_err_linear_kwh;
    std::optional<double> energy_err_quadrature_kwh;
    double value_total_usd = 0.0;
    std::optional<double> value_err_linear_usd;
    std::optional<double> value_err_quadrature_usd;
    int months_covered = 0;
    bool extrapolated = false;
    ErrorMode error_mode = ErrorMode::Quadrature;

    std::optional<double> energy_err_kwh() const {
        return error_mode == ErrorMode::Linear ? energy_err_linear_kwh : energy_err_quadrature_kwh;
    }
    std::optional<double> value_err_usd() const {
        return error_mode == ErrorMode::Linear ? value_err_linear_usd : value_err_quadrature_usd;
    }
};

/// Pool all samples of `calendar_month` (local time) across years and build
/// the month's estimate using `reference_year` hour counts. Value fields are
/// left empty; apply a schedule via monthly_value / with_value.
/// Returns nullopt when the series has no data for that month.
std::optional<MonthlyEstimate> monthly_estimate(const PowerSeries& power,
                                                const TariffCalendar& calendar,
                                                int calendar_month, int reference_year);

/// Displaced-supply value of one month's energy:
/// value = E_hlh/1000 * r_hlh + E_llh/1000 * r_llh, errors propagated through
/// the rates (class terms combined in quadrature).
ValueWithError monthly_value(const MonthlyEstimate& est, const RateSchedule& schedule);

/// Convenience: copy of `est` with value fields filled in.
MonthlyEstimate with_value(MonthlyEstimate est, const RateSchedule& schedule);

/// Sum monthly estimates into a year figure. At most one estimate per
/// calendar month (duplicates throw std::invalid_argument). Errors are
/// aggregated both ways; `mode` selects which one reports consider primary.
/// Absent monthly errors stay absent: a year built only from single-instance
/// months carries no error bars.
AnnualEstimate annualize(std::span<const MonthlyEstimate> estimates,
                         ErrorMode mode = ErrorMode::Quadrature);

/// Same sums as annualize, explicitly tagged as an extrapolation ("observed
/// months taken as typical"). Requires at least one month.
AnnualEstimate annual_extrapolation(std::span<const MonthlyEstimate> estimates,
                                    ErrorMode mode = ErrorMode::Quadrature);

} // namespace gridworth
