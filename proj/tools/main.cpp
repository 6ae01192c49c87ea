// gridworth: value analysis of distributed generation under HLH/LLH tariffs.
//
// Subcommands: energy, demand, curve, capacity, hours. Reports are plain CSV
// plus a JSON manifest recording input hashes and parameters, so identical
// inputs and flags always produce byte-identical output files.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gridworth/calendar.hpp"
#include "gridworth/characterization.hpp"
#include "gridworth/demand.hpp"
#include "gridworth/errors.hpp"
#include "gridworth/rates.hpp"
#include "gridworth/report.hpp"
#include "gridworth/timeseries.hpp"
#include "gridworth/valuation.hpp"

namespace fs = std::filesystem;
using namespace gridworth;

namespace {

std::string default_timezone() {
    const char* env = std::getenv("GRIDWORTH_TZ");
    return env && *env ? env : "America/Los_Angeles";
}

// Rethrows parse failures with the file name attached so the CLI diagnostic
// reads "file:line: cause".
template <typename Fn>
auto with_file(const fs::path& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open '" + path.string() + "'");
    try {
        return fn(in);
    } catch (const ParseError& e) {
        const std::string where =
            e.line() > 0 ? path.string() + ":" + std::to_string(e.line()) : path.string();
        throw Error(where + ": " + (e.cause().empty() ? e.what() : e.cause()));
    }
}

std::vector<std::chrono::year_month_day> load_calendar_overrides(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open '" + path.string() + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(path.string() + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object() || !doc.contains("exclude_dates") || !doc["exclude_dates"].is_array())
        throw Error(path.string() + ": expected {\"exclude_dates\": [\"YYYY-MM-DD\", ...]}");
    std::vector<std::chrono::year_month_day> dates;
    for (const auto& item : doc["exclude_dates"]) {
        if (!item.is_string())
            throw Error(path.string() + ": exclude_dates entries must be strings");
        const Instant t = parse_rfc3339_utc(item.get<std::string>() + "T00:00Z");
        dates.emplace_back(std::chrono::floor<std::chrono::days>(t));
    }
    return dates;
}

struct CalendarOptions {
    std::string tz;
    std::string overrides_path;

    TariffCalendar build() const {
        TariffCalendar::Options opts;
        opts.timezone = tz;
        if (!overrides_path.empty())
            opts.extra_exclusions = load_calendar_overrides(overrides_path);
        return TariffCalendar{opts};
    }
};

void write_report_file(const fs::path& dir, const std::string& name, AnalysisManifest& manifest,
                       const std::function<void(std::ostream&)>& writer) {
    const fs::path path = dir / name;
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    writer(out);
    if (!out)
        throw Error("failed writing '" + path.string() + "'");
    manifest.outputs.push_back(name);
}

void finish_manifest(const fs::path& dir, const std::string& name,
                     const AnalysisManifest& manifest) {
    const fs::path path = dir / name;
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    write_manifest(out, manifest);
}

ErrorMode parse_error_mode(const std::string& mode) {
    if (mode == "linear")
        return ErrorMode::Linear;
    if (mode == "quadrature")
        return ErrorMode::Quadrature;
    throw Error("unknown error mode '" + mode + "' (expected linear or quadrature)");
}

int latest_local_year(const PowerSeries& power, const TariffCalendar& calendar) {
    int latest = 0;
    for (const PowerSample& s : power.samples)
        latest = std::max(latest, calendar.local_year_month(s.timestamp).first);
    return latest;
}

struct EnergyArgs {
    std::string generation, schedule, out_dir = ".", error_mode = "quadrature";
    CalendarOptions cal;
    int reference_year = 0; // 0 = latest year present in the data
};

void run_energy(const EnergyArgs& args) {
    const TariffCalendar calendar = args.cal.build();
    const RateSchedule schedule = load_rate_schedule_file(args.schedule);
    const IntervalSeries series = with_file(args.generation, [&](std::istream& in) {
        return parse_interval_csv(in, fs::path(args.generation).stem().string());
    });
    if (series.empty())
        throw Error("no data in '" + args.generation + "'");
    const PowerSeries power = to_average_power(series);

    const int reference_year =
        args.reference_year != 0 ? args.reference_year : latest_local_year(power, calendar);
    const ErrorMode mode = parse_error_mode(args.error_mode);

    std::vector<MonthlyEstimate> months;
    for (int m = 1; m <= 12; ++m)
        if (auto est = monthly_estimate(power, calendar, m, reference_year))
            months.push_back(with_value(*est, schedule));
    if (months.empty())
        throw Error("no data in '" + args.generation + "'");
    const AnnualEstimate year = annualize(months, mode);

    fs::create_directories(args.out_dir);
    AnalysisManifest manifest;
    manifest.command = "energy";
    manifest.parameters = {{"tz", calendar.zone().name()},
                           {"reference_year", std::to_string(reference_year)},
                           {"error_mode", args.error_mode}};
    manifest.inputs = {args.generation, args.schedule};
    if (!args.cal.overrides_path.empty())
        manifest.inputs.push_back(args.cal.overrides_path);

    write_report_file(args.out_dir, "energy_monthly.csv", manifest,
                      [&](std::ostream& out) { write_energy_csv(out, months); });
    write_report_file(args.out_dir, "energy_annual.json", manifest,
                      [&](std::ostream& out) { write_energy_annual_json(out, year); });
    finish_manifest(args.out_dir, "energy_manifest.json", manifest);
}

struct DemandArgs {
    std::string generation, peaks, schedule, out_dir = ".", error_mode = "quadrature";
    std::string utility_load;
    CalendarOptions cal;
    double min_hour_coverage = 0.5;
    double determinant_band_kw = 0.0;
    std::size_t peak_window = 24;
};

void run_demand(const DemandArgs& args) {
    const TariffCalendar calendar = args.cal.build();
    const RateSchedule schedule = load_rate_schedule_file(args.schedule);
    const IntervalSeries series = with_file(args.generation, [&](std::istream& in) {
        return parse_interval_csv(in, fs::path(args.generation).stem().string());
    });
    const PowerSeries power = to_average_power(series);
    const PeakHourRecord all_peaks =
        with_file(args.peaks, [](std::istream& in) { return parse_peak_history_csv(in); });
    if (all_peaks.entries.empty())
        throw Error("no peak-hour history in '" + args.peaks + "'");
    const PeakHourRecord peaks = all_peaks.most_recent(args.peak_window);
    const ErrorMode mode = parse_error_mode(args.error_mode);

    std::vector<DemandReportRow> rows;
    std::vector<DemandDelta> deltas;
    for (int m = 1; m <= 12; ++m) {
        DemandReportRow row;
        row.month = m;
        try {
            const DemandDelta d =
                demand_delta(power, peaks, calendar, schedule, m, args.min_hour_coverage);
            deltas.push_back(d);
            row.delta = d;
        } catch (const InsufficientHistoryError&) {
            row.status = "insufficient history";
        } catch (const NoDataError&) {
            row.status = "no data";
        }
        rows.push_back(std::move(row));
    }
    const AnnualDemandImpact impact = annual_demand_impact(deltas, mode);

    fs::create_directories(args.out_dir);
    AnalysisManifest manifest;
    manifest.command = "demand";
    manifest.parameters = {{"tz", calendar.zone().name()},
                           {"error_mode", args.error_mode},
                           {"min_hour_coverage", format_number(args.min_hour_coverage)},
                           {"peak_window", std::to_string(args.peak_window)},
                           {"determinant_band_kw", format_number(args.determinant_band_kw)}};
    manifest.inputs = {args.generation, args.peaks, args.schedule};
    if (!args.utility_load.empty())
        manifest.inputs.push_back(args.utility_load);
    if (!args.cal.overrides_path.empty())
        manifest.inputs.push_back(args.cal.overrides_path);

    write_report_file(args.out_dir, "demand_monthly.csv", manifest,
                      [&](std::ostream& out) { write_demand_csv(out, rows); });
    write_report_file(args.out_dir, "demand_annual.json", manifest,
                      [&](std::ostream& out) { write_demand_annual_json(out, impact); });

    // Screening of the utility's own load: months whose determinant is not
    // safely positive need more than this differential analysis.
    if (!args.utility_load.empty()) {
        const std::vector<HourlyLoad> loads = with_file(
            args.utility_load, [](std::istream& in) { return parse_hourly_load_csv(in); });
        std::map<std::pair<int, int>, DeterminantInput> by_month;
        for (const HourlyLoad& h : loads) {
            if (calendar.classify_hour(h.hour_start) != HourClass::HLH)
                continue;
            auto& input = by_month[calendar.local_year_month(h.hour_start)];
            input.hlh_loads.push_back(h);
            input.grandfather_kw = schedule.grandfather_kw;
        }
        std::vector<DeterminantRow> checks;
        for (const auto& [ym, input] : by_month) {
            char label[16];
            std::snprintf(label, sizeof label, "%04d-%02d", ym.first, ym.second);
            checks.push_back({label, assess_determinant(input, args.determinant_band_kw)});
        }
        write_report_file(args.out_dir, "determinant_check.csv", manifest,
                          [&](std::ostream& out) { write_determinant_csv(out, checks); });
    }
    finish_manifest(args.out_dir, "demand_manifest.json", manifest);
}

struct CurveArgs {
    std::string generation, met, out_dir = ".";
    CalendarOptions cal;
    double bin_width_mps = 1.0;
    int tolerance_seconds = 150;
    int diurnal_month = 0; // 0 = skip the diurnal profile
};

void run_curve(const CurveArgs& args) {
    const IntervalSeries series = with_file(args.generation, [&](std::istream& in) {
        return parse_interval_csv(in, fs::path(args.generation).stem().string());
    });
    const PowerSeries power = to_average_power(series);
    const std::vector<MetSample> met =
        with_file(args.met, [](std::istream& in) { return parse_met_csv(in); });

    AlignStats align_stats;
    const std::vector<PairedSample> pairs =
        align_with_met(power, met, std::chrono::seconds{args.tolerance_seconds}, &align_stats);
    const PowerCurve curve = power_curve(pairs, args.bin_width_mps);

    fs::create_directories(args.out_dir);
    AnalysisManifest manifest;
    manifest.command = "curve";
    manifest.parameters = {{"bin_width_mps", format_number(args.bin_width_mps)},
                           {"tolerance_seconds", std::to_string(args.tolerance_seconds)},
                           {"pairs_matched", std::to_string(align_stats.matched)},
                           {"power_unmatched", std::to_string(align_stats.unmatched_power)},
                           {"met_unmatched", std::to_string(align_stats.unmatched_met)}};
    manifest.inputs = {args.generation, args.met};

    write_report_file(args.out_dir, "power_curve.csv", manifest,
                      [&](std::ostream& out) { write_power_curve_csv(out, curve); });

    if (args.diurnal_month != 0) {
        const TariffCalendar calendar = args.cal.build();
        manifest.parameters.emplace_back("tz", calendar.zone().name());
        manifest.parameters.emplace_back("diurnal_month", std::to_string(args.diurnal_month));
        const DiurnalProfile profile = diurnal_profile(power, calendar, args.diurnal_month);
        write_report_file(args.out_dir, "diurnal_profile.csv", manifest,
                          [&](std::ostream& out) { write_diurnal_csv(out, profile); });
    }
    finish_manifest(args.out_dir, "curve_manifest.json", manifest);
}

void run_capacity(double annual_kwh, double nameplate_kw) {
    const double cf = capacity_factor_percent(annual_kwh, nameplate_kw);
    std::printf("%.1f%%\n", cf);
}

void run_hours(int year, int month, const CalendarOptions& cal) {
    const TariffCalendar calendar = cal.build();
    const MonthHours counts = calendar.hours_in_month(year, month);
    std::printf("HLH %d, LLH %d\n", counts.hlh, counts.llh);
}

void add_calendar_flags(CLI::App* cmd, CalendarOptions& cal) {
    cmd->add_option("--tz", cal.tz, "IANA timezone for civil-time rules")
        ->default_val(default_timezone());
    cmd->add_option("--calendar-overrides", cal.overrides_path,
                    "JSON file with extra excluded dates: {\"exclude_dates\": [\"YYYY-MM-DD\"]}");
}

std::string one_line(std::string text) {
    for (char& c : text)
        if (c == '\n' || c == '\r')
            c = ' ';
    return text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monetary and performance value of distributed generation under "
                 "HLH/LLH tariff rates"};
    app.require_subcommand(1);

    EnergyArgs energy;
    auto* energy_cmd = app.add_subcommand(
        "energy", "Monthly and annual displaced-energy value from interval meter data");
    energy_cmd
        ->add_option("-g,--generation", energy.generation, "Interval CSV (timestamp_utc,energy_wh)")
        ->required();
    energy_cmd->add_option("-s,--schedule", energy.schedule, "Rate schedule JSON")->required();
    energy_cmd->add_option("--reference-year", energy.reference_year,
                           "Year whose HLH/LLH hour counts monetize pooled power "
                           "(default: latest year in the data)");
    energy_cmd->add_option("--error-mode", energy.error_mode, "linear or quadrature")
        ->default_val("quadrature");
    energy_cmd->add_option("--out-dir", energy.out_dir, "Report directory")->default_val(".");
    add_calendar_flags(energy_cmd, energy.cal);
    energy_cmd->callback([&] { run_energy(energy); });

    DemandArgs demand;
    auto* demand_cmd =
        app.add_subcommand("demand", "Monthly demand-charge impact of a generation resource");
    demand_cmd->add_option("-g,--generation", demand.generation, "Interval CSV")->required();
    demand_cmd
        ->add_option("-p,--peaks", demand.peaks, "Peak-hour history CSV (month,peak_hour_start_utc)")
        ->required();
    demand_cmd->add_option("-s,--schedule", demand.schedule, "Rate schedule JSON")->required();
    demand_cmd->add_option("--utility-load", demand.utility_load,
                           "Hourly utility purchases CSV (hour_start_utc,mean_kw) for "
                           "determinant screening");
    demand_cmd->add_option("--error-mode", demand.error_mode, "linear or quadrature")
        ->default_val("quadrature");
    demand_cmd
        ->add_option("--min-hour-coverage", demand.min_hour_coverage,
                     "Fraction of 5-minute slots an hour needs to count")
        ->default_val(0.5);
    demand_cmd
        ->add_option("--peak-window", demand.peak_window,
                     "Number of most recent peak-hour entries to use")
        ->default_val(24);
    demand_cmd->add_option("--determinant-band", demand.determinant_band_kw,
                           "Near-zero band (kW) for the determinant screening");
    demand_cmd->add_option("--out-dir", demand.out_dir, "Report directory")->default_val(".");
    add_calendar_flags(demand_cmd, demand.cal);
    demand_cmd->callback([&] { run_demand(demand); });

    CurveArgs curve;
    auto* curve_cmd = app.add_subcommand("curve", "Wind-speed-binned power curve from paired data");
    curve_cmd->add_option("-g,--generation", curve.generation, "Interval CSV")->required();
    curve_cmd->add_option("-m,--met", curve.met, "Met CSV (timestamp_utc,wind_speed_mps)")->required();
    curve_cmd->add_option("--bin-width", curve.bin_width_mps, "Wind-speed bin width (m/s)")
        ->default_val(1.0);
    curve_cmd
        ->add_option("--tolerance-seconds", curve.tolerance_seconds,
                     "Max timestamp distance when pairing power with met samples")
        ->default_val(150);
    curve_cmd->add_option("--diurnal-month", curve.diurnal_month,
                          "Also write the diurnal profile for this calendar month (1-12)");
    curve_cmd->add_option("--out-dir", curve.out_dir, "Report directory")->default_val(".");
    add_calendar_flags(curve_cmd, curve.cal);
    curve_cmd->callback([&] { run_curve(curve); });

    double annual_kwh = 0.0, nameplate_kw = 0.0;
    auto* capacity_cmd = app.add_subcommand("capacity", "Capacity factor from annual energy");
    capacity_cmd->add_option("--annual-kwh", annual_kwh, "Annual energy production (kWh)")->required();
    capacity_cmd->add_option("--nameplate-kw", nameplate_kw, "Nameplate capacity (kW)")->required();
    capacity_cmd->callback([&] { run_capacity(annual_kwh, nameplate_kw); });

    int year = 0, month = 0;
    CalendarOptions hours_cal;
    auto* hours_cmd = app.add_subcommand("hours", "HLH/LLH hour counts for a year-month");
    hours_cmd->add_option("--year", year, "Calendar year")->required();
    hours_cmd->add_option("--month", month, "Calendar month (1-12)")->required();
    add_calendar_flags(hours_cmd, hours_cal);
    hours_cmd->callback([&] { run_hours(year, month, hours_cal); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "gridworth: " << one_line(e.what()) << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "gridworth: " << one_line(e.what()) << '\n';
        return 1;
    }
    return 0;
}
