#include "gridworth/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "gridworth/errors.hpp"

namespace gridworth {

double round_sig(double value, int digits) {
    if (value == 0.0 || !std::isfinite(value))
        return value;
    const double magnitude = std::floor(std::log10(std::abs(value)));
    const double scale = std::pow(10.0, digits - 1 - magnitude);
    return std::round(value * scale) / scale;
}

double round_to_cents(double usd) {
    return std::llround(usd * 100.0) / 100.0;
}

std::string format_number(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string format_usd(double usd) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", round_to_cents(usd));
    return buf;
}

std::string fnv1a64_file_hex(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open input for hashing: '" + path.string() + "'");
    std::uint64_t hash = 0xcbf29ce484222325ull;
    char chunk[4096];
    while (in.read(chunk, sizeof chunk) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(chunk[i]);
            hash *= 0x100000001b3ull;
        }
        if (!in)
            break;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

namespace {

std::string opt_usd_field(const std::optional<double>& usd) {
    return usd ? format_usd(*usd) : std::string{};
}

std::string opt_number_field(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string{};
}

} // namespace

void write_energy_csv(std::ostream& out, std::span<const MonthlyEstimate> months) {
    out << "month,energy_kwh,energy_se_kwh,value_usd,value_se_usd\n";

    double energy_total = 0.0;
    double se_linear = 0.0, se_quad = 0.0;
    long long value_cents = 0, value_se_linear_cents = 0;
    double value_se_quad = 0.0;
    bool any_energy_se = false, any_value_se = false;

    for (const MonthlyEstimate& m : months) {
        const double energy = round_sig(m.energy_total_kwh, 3);
        energy_total += energy;
        const double value = round_to_cents(m.value_usd);
        value_cents += std::llround(value * 100.0);

        std::optional<double> energy_se;
        if (m.energy_total_se_kwh) {
            energy_se = round_sig(*m.energy_total_se_kwh, 3);
            se_linear += *energy_se;
            se_quad += *energy_se * *energy_se;
            any_energy_se = true;
        }
        std::optional<double> value_se;
        if (m.value_se_usd) {
            value_se = round_to_cents(*m.value_se_usd);
            value_se_linear_cents += std::llround(*value_se * 100.0);
            value_se_quad += *value_se * *value_se;
            any_value_se = true;
        }

        out << m.calendar_month << ',' << format_number(energy) << ','
            << opt_number_field(energy_se) << ',' << format_usd(value) << ','
            << opt_usd_field(value_se) << '\n';
    }

    const std::string total_value = format_usd(static_cast<double>(value_cents) / 100.0);
    out << "total_linear," << format_number(energy_total) << ','
        << (any_energy_se ? format_number(round_sig(se_linear, 3)) : std::string{}) << ','
        << total_value << ','
        << (any_value_se ? format_usd(static_cast<double>(value_se_linear_cents) / 100.0)
                         : std::string{})
        << '\n';
    out << "total_quadrature," << format_number(energy_total) << ','
        << (any_energy_se ? format_number(round_sig(std::sqrt(se_quad), 3)) : std::string{}) << ','
        << total_value << ',' << (any_value_se ? format_usd(std::sqrt(value_se_quad)) : std::string{})
        << '\n';
}

void write_energy_annual_json(std::ostream& out, const AnnualEstimate& year) {
    nlohmann::ordered_json doc;
    doc["energy_total_kwh"] = year.energy_total_kwh;
    doc["energy_err_kwh"] =
        year.energy_err_kwh() ? nlohmann::json(*year.energy_err_kwh()) : nlohmann::json(nullptr);
    doc["energy_err_linear_kwh"] = year.energy_err_linear_kwh
                                       ? nlohmann::json(*year.energy_err_linear_kwh)
                                       : nlohmann::json(nullptr);
    doc["energy_err_quadrature_kwh"] = year.energy_err_quadrature_kwh
                                           ? nlohmann::json(*year.energy_err_quadrature_kwh)
                                           : nlohmann::json(nullptr);
    doc["value_total_usd"] = round_to_cents(year.value_total_usd);
    doc["value_err_usd"] = year.value_err_usd() ? nlohmann::json(round_to_cents(*year.value_err_usd()))
                                                : nlohmann::json(nullptr);
    doc["value_err_linear_usd"] = year.value_err_linear_usd
                                      ? nlohmann::json(round_to_cents(*year.value_err_linear_usd))
                                      : nlohmann::json(nullptr);
    doc["value_err_quadrature_usd"] =
        year.value_err_quadrature_usd ? nlohmann::json(round_to_cents(*year.value_err_quadrature_usd))
                                      : nlohmann::json(nullptr);
    doc["months_covered"] = year.months_covered;
    doc["extrapolated"] = year.extrapolated;
    doc["error_mode"] = year.error_mode == ErrorMode::Linear ? "linear" : "quadrature";
    out << doc.dump(2) << '\n';
}

void write_demand_csv(std::ostream& out, std::span<const DemandReportRow> rows) {
    out << "month,delta_demand_kw,delta_demand_sd_kw,delta_ahlh_kwh_per_h,delta_expense_usd,"
           "delta_expense_sd_usd,status\n";

    long long expense_cents = 0, sd_linear_cents = 0;
    double sd_quad = 0.0;
    bool any_sd = false;

    for (const DemandReportRow& row : rows) {
        if (!row.delta) {
            out << row.month << ",,,,,," << row.status << '\n';
            continue;
        }
        const DemandDelta& d = *row.delta;
        const double expense = round_to_cents(d.delta_expense_usd);
        expense_cents += std::llround(expense * 100.0);
        std::optional<double> sd;
        if (d.delta_expense_sd_usd) {
            sd = round_to_cents(*d.delta_expense_sd_usd);
            sd_linear_cents += std::llround(*sd * 100.0);
            sd_quad += *sd * *sd;
            any_sd = true;
        }
        out << row.month << ',' << format_number(round_sig(d.delta_peak_kw, 3)) << ','
            << opt_number_field(d.delta_peak_sd_kw
                                    ? std::optional<double>(round_sig(*d.delta_peak_sd_kw, 3))
                                    : std::nullopt)
            << ',' << format_number(round_sig(d.delta_ahlh_kw, 3)) << ',' << format_usd(expense)
            << ',' << opt_usd_field(sd) << ',' << row.status << '\n';
    }

    const std::string total = format_usd(static_cast<double>(expense_cents) / 100.0);
    out << "total_linear,,,," << total << ','
        << (any_sd ? format_usd(static_cast<double>(sd_linear_cents) / 100.0) : std::string{})
        << ",\n";
    out << "total_quadrature,,,," << total << ','
        << (any_sd ? format_usd(std::sqrt(sd_quad)) : std::string{}) << ",\n";
}

void write_demand_annual_json(std::ostream& out, const AnnualDemandImpact& impact) {
    nlohmann::ordered_json doc;
    doc["expense_usd"] = round_to_cents(impact.expense_usd);
    doc["expense_err_usd"] =
        impact.err_usd ? nlohmann::json(round_to_cents(*impact.err_usd)) : nlohmann::json(nullptr);
    doc["months_covered"] = impact.months_covered;
    doc["error_mode"] = impact.error_mode == ErrorMode::Linear ? "linear" : "quadrature";
    out << doc.dump(2) << '\n';
}

void write_determinant_csv(std::ostream& out, std::span<const DeterminantRow> rows) {
    out << "month,determinant_kw,charged,near_zero\n";
    for (const DeterminantRow& row : rows) {
        out << row.year_month << ',' << format_number(round_sig(row.assessment.determinant_kw, 6)) << ','
            << (row.assessment.charged ? "true" : "false") << ','
            << (row.assessment.near_zero ? "true" : "false") << '\n';
    }
}

void write_power_curve_csv(std::ostream& out, const PowerCurve& curve) {
    out << "speed_mps,mean_kw,p16_kw,p84_kw,n\n";
    for (const PowerCurveBin& bin : curve.bins) {
        out << format_number(bin.speed_center_mps) << ',' << format_number(round_sig(bin.mean_kw, 6))
            << ',' << format_number(bin.p16_kw) << ',' << format_number(bin.p84_kw) << ','
            << bin.sample_count << '\n';
    }
}

void write_diurnal_csv(std::ostream& out, const DiurnalProfile& profile) {
    out << "hour_local,mean_kw,se_kw\n";
    for (int h = 0; h < 24; ++h) {
        const auto& stat = profile.per_hour[static_cast<std::size_t>(h)];
        out << h << ',' << format_number(round_sig(stat.mean_kw, 6)) << ','
            << opt_number_field(stat.se_kw ? std::optional<double>(round_sig(*stat.se_kw, 6))
                                           : std::nullopt)
            << '\n';
    }
}

void write_manifest(std::ostream& out, const AnalysisManifest& manifest) {
    nlohmann::ordered_json doc;
    doc["tool"] = "gridworth";
    doc["command"] = manifest.command;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [key, value] : manifest.parameters)
        params[key] = value;
    doc["parameters"] = params;
    doc["inputs"] = nlohmann::ordered_json::array();
    for (const auto& path : manifest.inputs)
        doc["inputs"].push_back({{"path", path.string()}, {"fnv1a64", fnv1a64_file_hex(path)}});
    doc["outputs"] = manifest.outputs;
    out << doc.dump(2) << '\n';
}

} // namespace gridworth
