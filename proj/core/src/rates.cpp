#include "gridworth/rates.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "gridworth/errors.hpp"

namespace gridworth {

namespace {

double require_finite_rate(double value, const char* field, int month) {
    if (!std::isfinite(value))
        throw ScheduleError(std::string("non-finite ") + field + " for month " +
                            std::to_string(month));
    if (value < 0.0)
        throw ScheduleError(std::string("negative rate: ") + field + " for month " +
                            std::to_string(month));
    return value;
}

} // namespace

const MonthRates& RateSchedule::at(int month) const {
    if (month < 1 || month > 12)
        throw ScheduleError("month out of range: " + std::to_string(month));
    return months[static_cast<std::size_t>(month - 1)];
}

RateSchedule load_rate_schedule(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ScheduleError(std::string("invalid schedule JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ScheduleError("schedule must be a JSON object");
    if (!doc.contains("months") || !doc["months"].is_array())
        throw ScheduleError("schedule is missing the \"months\" array");

    RateSchedule schedule;
    schedule.schedule_id = doc.value("schedule_id", std::string{});
    if (!doc.contains("grandfather_kw") || !doc["grandfather_kw"].is_number())
        throw ScheduleError("schedule is missing \"grandfather_kw\"");
    schedule.grandfather_kw = doc["grandfather_kw"].get<double>();
    if (!std::isfinite(schedule.grandfather_kw) || schedule.grandfather_kw < 0.0)
        throw ScheduleError("grandfather_kw must be finite and non-negative");

    std::array<bool, 12> seen{};
    for (const auto& entry : doc["months"]) {
        if (!entry.is_object())
            throw ScheduleError("month entries must be JSON objects");
        for (const char* field : {"month", "hlh_energy_rate_usd_per_mwh",
                                  "llh_energy_rate_usd_per_mwh", "demand_rate_usd_per_kw"}) {
            if (!entry.contains(field) || !entry[field].is_number())
                throw ScheduleError(std::string("month entry is missing \"") + field + "\"");
        }
        const int m = entry["month"].get<int>();
        if (m < 1 || m > 12)
            throw ScheduleError("month out of range: " + std::to_string(m));
        if (seen[static_cast<std::size_t>(m - 1)])
            throw ScheduleError("duplicate month " + std::to_string(m));
        seen[static_cast<std::size_t>(m - 1)] = true;

        MonthRates& r = schedule.months[static_cast<std::size_t>(m - 1)];
        r.month = m;
        r.hlh_energy_rate_usd_per_mwh = require_finite_rate(
            entry["hlh_energy_rate_usd_per_mwh"].get<double>(), "hlh_energy_rate_usd_per_mwh", m);
        r.llh_energy_rate_usd_per_mwh = require_finite_rate(
            entry["llh_energy_rate_usd_per_mwh"].get<double>(), "llh_energy_rate_usd_per_mwh", m);
        r.demand_rate_usd_per_kw = require_finite_rate(entry["demand_rate_usd_per_kw"].get<double>(),
                                                       "demand_rate_usd_per_kw", m);
    }

    for (int m = 1; m <= 12; ++m)
        if (!seen[static_cast<std::size_t>(m - 1)])
            throw ScheduleError("missing month " + std::to_string(m));

    return schedule;
}

RateSchedule load_rate_schedule_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ScheduleError("cannot open rate schedule '" + path.string() + "'");
    return load_rate_schedule(in);
}

void write_rate_schedule(std::ostream& out, const RateSchedule& schedule) {
    nlohmann::ordered_json doc;
    doc["schedule_id"] = schedule.schedule_id;
    doc["grandfather_kw"] = schedule.grandfather_kw;
    doc["months"] = nlohmann::ordered_json::array();
    for (const MonthRates& r : schedule.months) {
        doc["months"].push_back({{"month", r.month},
                                 {"hlh_energy_rate_usd_per_mwh", r.hlh_energy_rate_usd_per_mwh},
                                 {"llh_energy_rate_usd_per_mwh", r.llh_energy_rate_usd_per_mwh},
                                 {"demand_rate_usd_per_kw", r.demand_rate_usd_per_kw}});
    }
    out << doc.dump(2) << '\n';
}

} // namespace gridworth
