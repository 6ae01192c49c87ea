#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "gridworth/errors.hpp"
#include "gridworth/rates.hpp"
#include "gridworth/valuation.hpp"

#include "helpers.hpp"

using namespace gridworth;
using namespace gridworth::testing;

namespace {

RateSchedule flat_schedule(double hlh, double llh, double demand = 2.0) {
    RateSchedule s;
    s.schedule_id = "flat";
    for (int m = 1; m <= 12; ++m)
        s.months[std::size_t(m - 1)] = {m, hlh, llh, demand};
    return s;
}

MonthlyEstimate bare_estimate(int month, double e_hlh, double e_llh,
                              std::optional<double> se_hlh = std::nullopt,
                              std::optional<double> se_llh = std::nullopt) {
    MonthlyEstimate est;
    est.calendar_month = month;
    est.energy_hlh_kwh = e_hlh;
    est.energy_hlh_se_kwh = se_hlh;
    est.energy_llh_kwh = e_llh;
    est.energy_llh_se_kwh = se_llh;
    est.energy_total_kwh = e_hlh + e_llh;
    if (se_hlh || se_llh)
        est.energy_total_se_kwh = std::sqrt(se_hlh.value_or(0) * se_hlh.value_or(0) +
                                            se_llh.value_or(0) * se_llh.value_or(0));
    return est;
}

} // namespace

TEST_CASE("constant 1 kW month: energy equals the HLH hour count, no error bar") {
    const TariffCalendar cal;
    PowerSeries power;
    fill_local_month(power, cal, 2013, 1, [](Instant) { return 1.0; });

    const auto est = monthly_estimate(power, cal, 1, 2013);
    REQUIRE(est.has_value());
    CHECK(est->n_month_instances == 1);
    CHECK(est->mean_power_hlh_kw == doctest::Approx(1.0));
    CHECK(est->energy_hlh_kwh == doctest::Approx(416.0));
    CHECK(est->energy_llh_kwh == doctest::Approx(328.0));
    CHECK(est->energy_total_kwh == doctest::Approx(744.0));
    CHECK_FALSE(est->se_power_hlh_kw.has_value());
    CHECK_FALSE(est->energy_total_se_kwh.has_value());
}

TEST_CASE("no data for the month is distinguishable from zero") {
    const TariffCalendar cal;
    PowerSeries power;
    fill_local_month(power, cal, 2013, 1, [](Instant) { return 0.0; });

    CHECK_FALSE(monthly_estimate(power, cal, 2, 2013).has_value()); // absent month
    const auto jan = monthly_estimate(power, cal, 1, 2013);
    REQUIRE(jan.has_value()); // present month, zero output
    CHECK(jan->energy_total_kwh == 0.0);
}

TEST_CASE("two month-instances: se is the two-sample closed form |p1-p2|/2") {
    const TariffCalendar cal;
    PowerSeries power;
    fill_local_month(power, cal, 2012, 8, [](Instant) { return 2.0; });
    fill_local_month(power, cal, 2013, 8, [](Instant) { return 3.0; });

    const auto est = monthly_estimate(power, cal, 8, 2013);
    REQUIRE(est.has_value());
    CHECK(est->n_month_instances == 2);
    CHECK(est->mean_power_hlh_kw == doctest::Approx(2.5));
    REQUIRE(est->se_power_hlh_kw.has_value());
    CHECK(*est->se_power_hlh_kw == doctest::Approx(0.5)); // |2-3|/2
    // August 2013 has 432 HLH hours (31 days, 4 Sundays, no holiday).
    CHECK(est->energy_hlh_kwh == doctest::Approx(2.5 * 432.0));
    CHECK(*est->energy_hlh_se_kwh == doctest::Approx(0.5 * 432.0));
}

TEST_CASE("pooled mean equals brute-force mean of in-class samples") {
    const TariffCalendar cal;
    PowerSeries power;
    std::mt19937 rng{23};
    std::uniform_real_distribution<double> kw(0.0, 5.0);
    fill_local_month(power, cal, 2012, 6, [&](Instant) { return kw(rng); });
    fill_local_month(power, cal, 2013, 6, [&](Instant) { return kw(rng); });

    double hlh_sum = 0.0, llh_sum = 0.0;
    std::size_t hlh_n = 0, llh_n = 0;
    for (const PowerSample& s : power.samples) {
        if (cal.classify_hour(s.timestamp) == HourClass::HLH) {
            hlh_sum += s.power_kw;
            ++hlh_n;
        } else {
            llh_sum += s.power_kw;
            ++llh_n;
        }
    }
    const auto est = monthly_estimate(power, cal, 6, 2013);
    REQUIRE(est.has_value());
    CHECK(est->mean_power_hlh_kw == doctest::Approx(hlh_sum / double(hlh_n)).epsilon(1e-12));
    CHECK(est->mean_power_llh_kw == doctest::Approx(llh_sum / double(llh_n)).epsilon(1e-12));
    CHECK(est->n_hlh_samples == hlh_n);
    CHECK(est->n_llh_samples == llh_n);
}

TEST_CASE("single-rate collapse: partitioned energy equals unpartitioned on gap-free data") {
    const TariffCalendar cal;
    PowerSeries power;
    std::mt19937 rng{29};
    std::uniform_real_distribution<double> kw(0.0, 10.0);
    fill_local_month(power, cal, 2013, 3, [&](Instant) { return kw(rng); }); // DST month

    const auto est = monthly_estimate(power, cal, 3, 2013);
    REQUIRE(est.has_value());

    double sum = 0.0;
    for (const PowerSample& s : power.samples)
        sum += s.power_kw;
    const double mean_all = sum / double(power.samples.size());
    const double unpartitioned = mean_all * cal.hours_in_month(2013, 3).total();
    CHECK(est->energy_total_kwh == doctest::Approx(unpartitioned).epsilon(1e-9));
}

TEST_CASE("monthly value arithmetic") {
    SUBCASE("1000 kWh @ 30 plus 500 kWh @ 20 is $40") {
        const auto est = bare_estimate(7, 1000.0, 500.0);
        const auto value = monthly_value(est, flat_schedule(30.0, 20.0));
        CHECK(value.usd == doctest::Approx(40.0));
        CHECK_FALSE(value.se_usd.has_value());
    }
    SUBCASE("zero energy is $0") {
        const auto est = bare_estimate(7, 0.0, 0.0);
        CHECK(monthly_value(est, flat_schedule(30.0, 20.0)).usd == 0.0);
    }
    SUBCASE("doubling both rates doubles value and se") {
        const auto est = bare_estimate(7, 1000.0, 500.0, 100.0, 50.0);
        const auto v1 = monthly_value(est, flat_schedule(30.0, 20.0));
        const auto v2 = monthly_value(est, flat_schedule(60.0, 40.0));
        CHECK(v2.usd == doctest::Approx(2.0 * v1.usd));
        REQUIRE(v1.se_usd.has_value());
        REQUIRE(v2.se_usd.has_value());
        CHECK(*v2.se_usd == doctest::Approx(2.0 * *v1.se_usd));
    }
}

TEST_CASE("annualize sums and aggregates errors in both modes") {
    std::vector<MonthlyEstimate> months;
    months.push_back(bare_estimate(1, 300.0, 100.0, 30.0, 0.0));
    months.push_back(bare_estimate(2, 500.0, 200.0, 40.0, 0.0));
    months.push_back(bare_estimate(3, 700.0, 300.0));

    const AnnualEstimate linear = annualize(months, ErrorMode::Linear);
    CHECK(linear.energy_total_kwh == doctest::Approx(2100.0));
    CHECK(linear.months_covered == 3);
    CHECK(linear.extrapolated); // < 12 months
    REQUIRE(linear.energy_err_kwh().has_value());
    CHECK(*linear.energy_err_kwh() == doctest::Approx(70.0));

    const AnnualEstimate quad = annualize(months, ErrorMode::Quadrature);
    CHECK(*quad.energy_err_kwh() == doctest::Approx(50.0)); // sqrt(900+1600)
    CHECK(quad.energy_total_kwh == linear.energy_total_kwh);
}

TEST_CASE("duplicate calendar month is rejected") {
    std::vector<MonthlyEstimate> months = {bare_estimate(4, 1.0, 1.0), bare_estimate(4, 2.0, 2.0)};
    CHECK_THROWS_AS(annualize(months), std::invalid_argument);
}

TEST_CASE("a year of single-instance months has no error bars in either mode") {
    std::vector<MonthlyEstimate> months;
    for (int m = 1; m <= 12; ++m)
        months.push_back(bare_estimate(m, 100.0 * m, 10.0 * m));
    for (const ErrorMode mode : {ErrorMode::Linear, ErrorMode::Quadrature}) {
        const AnnualEstimate year = annualize(months, mode);
        CHECK_FALSE(year.energy_err_kwh().has_value());
        CHECK_FALSE(year.value_err_usd().has_value());
        CHECK_FALSE(year.extrapolated);
        CHECK(year.months_covered == 12);
    }
}

TEST_CASE("annual_extrapolation flags the presumption and keeps the sums") {
    std::vector<MonthlyEstimate> months = {bare_estimate(5, 100.0, 0.0)};
    const AnnualEstimate year = annual_extrapolation(months);
    CHECK(year.energy_total_kwh == doctest::Approx(100.0));
    CHECK(year.months_covered == 1);
    CHECK(year.extrapolated);
    CHECK_THROWS_AS(annual_extrapolation({}), NoDataError);
}

TEST_CASE("scale equivariance: scaling power scales energies, values and errors") {
    const TariffCalendar cal;
    const RateSchedule schedule = flat_schedule(31.0, 19.0);
    const double k = 3.25;

    PowerSeries base, scaled;
    std::mt19937 rng{31};
    std::uniform_real_distribution<double> kw(0.0, 4.0);
    for (const int y : {2012, 2013})
        fill_local_month(base, cal, y, 9, [&](Instant) { return kw(rng); });
    for (const PowerSample& s : base.samples)
        scaled.samples.push_back({s.timestamp, k * s.power_kw});

    const auto est1 = with_value(*monthly_estimate(base, cal, 9, 2013), schedule);
    const auto est2 = with_value(*monthly_estimate(scaled, cal, 9, 2013), schedule);

    CHECK(est2.energy_total_kwh == doctest::Approx(k * est1.energy_total_kwh));
    CHECK(est2.value_usd == doctest::Approx(k * est1.value_usd));
    REQUIRE(est1.energy_total_se_kwh.has_value());
    CHECK(*est2.energy_total_se_kwh == doctest::Approx(k * *est1.energy_total_se_kwh));
    CHECK(*est2.value_se_usd == doctest::Approx(k * *est1.value_se_usd));

    const AnnualEstimate y1 = annualize(std::vector{est1});
    const AnnualEstimate y2 = annualize(std::vector{est2});
    CHECK(y2.energy_total_kwh == doctest::Approx(k * y1.energy_total_kwh));
    CHECK(*y2.energy_err_quadrature_kwh == doctest::Approx(k * *y1.energy_err_quadrature_kwh));
}

TEST_CASE("quadrature error never exceeds linear error") {
    std::mt19937 rng{37};
    std::uniform_real_distribution<double> se(0.0, 500.0);
    std::uniform_int_distribution<int> n_months(1, 12);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<MonthlyEstimate> months;
        const int n = n_months(rng);
        for (int m = 1; m <= n; ++m)
            months.push_back(bare_estimate(m, 100.0, 50.0, se(rng), se(rng)));
        const AnnualEstimate year = annualize(months);
        REQUIRE(year.energy_err_linear_kwh.has_value());
        CHECK(*year.energy_err_quadrature_kwh <= *year.energy_err_linear_kwh + 1e-9);
    }
}
