#include <doctest.h>

#include <algorithm>
#include <random>

#include "gridworth/characterization.hpp"
#include "gridworth/errors.hpp"
#include "gridworth/stats.hpp"

#include "helpers.hpp"

using namespace gridworth;
using namespace gridworth::testing;

namespace {

PairedSample pair_at(double speed, double power) {
    return {utc(2013, 5, 1, 0), power, speed};
}

} // namespace

TEST_CASE("constant bin collapses to a point") {
    std::vector<PairedSample> pairs(25, pair_at(5.0, 3.0));
    const PowerCurve curve = power_curve(pairs, 1.0);
    REQUIRE(curve.bins.size() == 1);
    CHECK(curve.bins[0].speed_center_mps == 5.0);
    CHECK(curve.bins[0].mean_kw == 3.0);
    CHECK(curve.bins[0].p16_kw == 3.0);
    CHECK(curve.bins[0].p84_kw == 3.0);
    CHECK(curve.bins[0].sample_count == 25);
}

TEST_CASE("nearest-rank percentiles on 1..100") {
    std::vector<PairedSample> pairs;
    for (int i = 1; i <= 100; ++i)
        pairs.push_back(pair_at(7.2, double(i)));
    const PowerCurve curve = power_curve(pairs, 1.0);
    REQUIRE(curve.bins.size() == 1);
    CHECK(curve.bins[0].speed_center_mps == 7.0); // 7.2 rounds to bin 7
    CHECK(curve.bins[0].p16_kw == 16.0);          // ceil(0.16*100) = 16th order statistic
    CHECK(curve.bins[0].p84_kw == 84.0);
    CHECK(curve.bins[0].mean_kw == doctest::Approx(50.5));
}

TEST_CASE("speeds already quantized at 1 m/s map one source value per bin") {
    std::vector<PairedSample> pairs;
    for (int s = 0; s <= 12; ++s)
        for (int k = 0; k < 10; ++k)
            pairs.push_back(pair_at(double(s), double(s) * 0.8));
    const PowerCurve curve = power_curve(pairs, 1.0);
    REQUIRE(curve.bins.size() == 13);
    for (std::size_t i = 0; i < curve.bins.size(); ++i) {
        CHECK(curve.bins[i].speed_center_mps == double(i));
        CHECK(curve.bins[i].sample_count == 10);
        CHECK(curve.bins[i].p16_kw == curve.bins[i].p84_kw); // single source value
    }
}

TEST_CASE("bins partition the input and keep p16 <= p84") {
    std::mt19937 rng{47};
    std::uniform_real_distribution<double> speed(0.0, 20.0);
    std::exponential_distribution<double> power(0.5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<PairedSample> pairs;
        const int n = 1 + int(rng() % 800);
        for (int i = 0; i < n; ++i)
            pairs.push_back(pair_at(speed(rng), power(rng)));
        const PowerCurve curve = power_curve(pairs, 1.0);

        std::size_t total = 0;
        for (const PowerCurveBin& bin : curve.bins) {
            total += bin.sample_count;
            CHECK(bin.sample_count > 0);
            CHECK(bin.p16_kw <= bin.p84_kw);
        }
        CHECK(total == pairs.size());
        CHECK(std::is_sorted(curve.bins.begin(), curve.bins.end(),
                             [](const PowerCurveBin& a, const PowerCurveBin& b) {
                                 return a.speed_center_mps < b.speed_center_mps;
                             }));
    }
}

TEST_CASE("mean stays inside the band for symmetric bins") {
    std::vector<PairedSample> pairs;
    for (int i = -50; i <= 50; ++i)
        pairs.push_back(pair_at(3.0, 10.0 + 0.05 * double(i)));
    const PowerCurve curve = power_curve(pairs, 1.0);
    REQUIRE(curve.bins.size() == 1);
    CHECK(curve.bins[0].p16_kw <= curve.bins[0].mean_kw);
    CHECK(curve.bins[0].mean_kw <= curve.bins[0].p84_kw);
}

TEST_CASE("empty input and bad bin width") {
    CHECK(power_curve({}, 1.0).bins.empty());
    CHECK_THROWS_AS(power_curve({}, 0.0), std::invalid_argument);
}

TEST_CASE("capacity factor formula and frozen reference points") {
    // value = annual_kwh / (nameplate * 8760) * 100
    CHECK(capacity_factor_percent(8760.0, 1.0) == doctest::Approx(100.0));
    CHECK(capacity_factor_percent(1700.0, 2.4) == doctest::Approx(8.1).epsilon(0.01));
    CHECK(capacity_factor_percent(7100.0, 10.0) == doctest::Approx(8.105).epsilon(0.001));
    CHECK(capacity_factor_percent(7200.0, 10.0) == doctest::Approx(8.219).epsilon(0.001));
    CHECK(capacity_factor_percent(29.0, 1.5) == doctest::Approx(0.22).epsilon(0.05));
    CHECK_THROWS_AS(capacity_factor_percent(100.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(capacity_factor_percent(100.0, -1.0), std::invalid_argument);
}

TEST_CASE("capacity factor is linear in energy and inverse-linear in nameplate") {
    std::mt19937 rng{53};
    std::uniform_real_distribution<double> e(10.0, 1e6);
    std::uniform_real_distribution<double> p(0.5, 100.0);
    for (int i = 0; i < 200; ++i) {
        const double energy = e(rng), nameplate = p(rng), k = 1.0 + p(rng);
        CHECK(capacity_factor_percent(k * energy, nameplate) ==
              doctest::Approx(k * capacity_factor_percent(energy, nameplate)));
        CHECK(capacity_factor_percent(energy, k * nameplate) ==
              doctest::Approx(capacity_factor_percent(energy, nameplate) / k));
    }
}

TEST_CASE("diurnal profile") {
    const TariffCalendar cal;

    SUBCASE("constant series is flat across all 24 hours") {
        PowerSeries power;
        fill_local_month(power, cal, 2013, 6, [](Instant) { return 1.0; });
        const DiurnalProfile profile = diurnal_profile(power, cal, 6);
        for (const auto& stat : profile.per_hour) {
            CHECK(stat.mean_kw == doctest::Approx(1.0));
            CHECK(stat.sample_count > 0);
        }
    }
    SUBCASE("generation confined to local 10:00-14:00 leaves other hours at zero") {
        PowerSeries power;
        fill_local_month(power, cal, 2013, 6, [&](Instant t) {
            const int h = cal.local_hour_of_day(t);
            return (h >= 10 && h < 14) ? 2.0 : 0.0;
        });
        const DiurnalProfile profile = diurnal_profile(power, cal, 6);
        for (int h = 0; h < 24; ++h) {
            const double expected = (h >= 10 && h < 14) ? 2.0 : 0.0;
            CHECK(profile.per_hour[std::size_t(h)].mean_kw == doctest::Approx(expected));
        }
    }
    SUBCASE("pooled per-hour mean equals brute force over local-hour samples") {
        PowerSeries power;
        std::mt19937 rng{59};
        std::uniform_real_distribution<double> kw(0.0, 8.0);
        for (const int y : {2012, 2013})
            fill_local_month(power, cal, y, 4, [&](Instant) { return kw(rng); });
        const DiurnalProfile profile = diurnal_profile(power, cal, 4);

        std::array<double, 24> sum{};
        std::array<std::size_t, 24> n{};
        for (const PowerSample& s : power.samples) {
            const int h = cal.local_hour_of_day(s.timestamp);
            sum[std::size_t(h)] += s.power_kw;
            ++n[std::size_t(h)];
        }
        for (int h = 0; h < 24; ++h) {
            REQUIRE(n[std::size_t(h)] > 0);
            CHECK(profile.per_hour[std::size_t(h)].mean_kw ==
                  doctest::Approx(sum[std::size_t(h)] / double(n[std::size_t(h)])).epsilon(1e-12));
            CHECK(profile.per_hour[std::size_t(h)].se_kw.has_value()); // many days observed
        }
    }
    SUBCASE("no data raises NoDataError") {
        PowerSeries power;
        fill_local_month(power, cal, 2013, 6, [](Instant) { return 1.0; });
        CHECK_THROWS_AS(diurnal_profile(power, cal, 7), NoDataError);
    }
}

TEST_CASE("nameplate exceedance") {
    PowerSeries power;
    for (int i = 0; i < 10; ++i)
        power.samples.push_back({utc(2013, 5, 1, 0) + std::chrono::minutes{5 * i}, 0.5});

    SUBCASE("all below nameplate") {
        const ExceedanceStats stats = nameplate_exceedance(power, 2.25);
        CHECK(stats.fraction_above == 0.0);
        CHECK(stats.max_kw == 0.5);
    }
    SUBCASE("stalled output far below nameplate") {
        power.samples.back().power_kw = 0.9;
        const ExceedanceStats stats = nameplate_exceedance(power, 2.25);
        CHECK(stats.max_kw == doctest::Approx(0.9));
        CHECK(stats.fraction_above == 0.0);
        CHECK(stats.max_kw < 0.5 * 2.25); // never came near the rating
    }
    SUBCASE("a sample exactly at nameplate does not count (strict inequality)") {
        power.samples.back().power_kw = 2.25;
        CHECK(nameplate_exceedance(power, 2.25).fraction_above == 0.0);
        power.samples.back().power_kw = 2.26;
        CHECK(nameplate_exceedance(power, 2.25).fraction_above == doctest::Approx(0.1));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(nameplate_exceedance(PowerSeries{}, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(nameplate_exceedance(power, 0.0), std::invalid_argument);
    }
}

TEST_CASE("nearest-rank percentile oracle agreement on random bins") {
    std::mt19937 rng{61};
    std::uniform_real_distribution<double> kw(0.0, 50.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 300;
        std::vector<double> xs(n);
        for (double& x : xs)
            x = kw(rng);

        // Oracle: sort and index directly.
        std::vector<double> sorted = xs;
        std::sort(sorted.begin(), sorted.end());
        const auto rank = [&](double p) {
            std::size_t r = std::size_t(std::ceil(p / 100.0 * double(n)));
            return sorted[std::max<std::size_t>(r, 1) - 1];
        };
        CHECK(nearest_rank_percentile(xs, 16.0) == rank(16.0));
        CHECK(nearest_rank_percentile(xs, 84.0) == rank(84.0));
        CHECK(nearest_rank_percentile(xs, 100.0) == sorted.back());
    }
}
