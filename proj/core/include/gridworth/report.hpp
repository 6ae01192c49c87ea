#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gridworth/characterization.hpp"
#include "gridworth/demand.hpp"
#include "gridworth/valuation.hpp"

namespace gridworth {

/// Round to `digits` significant figures (reporting only; statistics stay in
/// full precision).
double round_sig(double value, int digits);

/// Round to exact cents.
double round_to_cents(double usd);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

/// Fixed two-decimal dollars.
std::string format_usd(double usd);

/// FNV-1a 64-bit content hash, hex-encoded. Reproducibility fingerprint for
/// the run manifest, not a cryptographic digest.
std::string fnv1a64_file_hex(const std::filesystem::path& path);

/// Monthly energy/value table plus year-total rows.
/// Columns: month,energy_kwh,energy_se_kwh,value_usd,value_se_usd.
/// Energies are shown to 3 significant figures and dollars to cents; the
/// "total_linear"/"total_quadrature" rows aggregate the displayed values so
/// the emitted table is self-consistent.
void write_energy_csv(std::ostream& out, std::span<const MonthlyEstimate> months);

/// Annual summary with both error aggregations and the coverage flags.
void write_energy_annual_json(std::ostream& out, const AnnualEstimate& year);

/// One row of the demand report; `delta` is empty when the month could not be
/// analyzed (status then says why, e.g. "insufficient history").
struct DemandReportRow {
    int month = 0;
    std::optional<DemandDelta> delta;
    std::string status = "ok";
};

/// Columns: month,delta_demand_kw,delta_demand_sd_kw,delta_ahlh_kwh_per_h,
///          delta_expense_usd,delta_expense_sd_usd,status
/// plus "total_linear"/"total_quadrature" rows over the displayed expenses.
void write_demand_csv(std::ostream& out, std::span<const DemandReportRow> rows);

void write_demand_annual_json(std::ostream& out, const AnnualDemandImpact& impact);

/// Determinant screening of the utility's own load, one row per billed month:
/// month,determinant_kw,charged,near_zero  (month as "YYYY-MM").
struct DeterminantRow {
    std::string year_month;
    DeterminantAssessment assessment;
};
void write_determinant_csv(std::ostream& out, std::span<const DeterminantRow> rows);

/// Plot-ready power curve. Columns: speed_mps,mean_kw,p16_kw,p84_kw,n.
void write_power_curve_csv(std::ostream& out, const PowerCurve& curve);

/// Columns: hour_local,mean_kw,se_kw.
void write_diurnal_csv(std::ostream& out, const DiurnalProfile& profile);

/// Reproducibility record for one CLI run: inputs (with content hashes),
/// parameters, and the report files produced.
struct AnalysisManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> parameters; // emitted in order
    std::vector<std::filesystem::path> inputs;
    std::vector<std::string> outputs;
};

void write_manifest(std::ostream& out, const AnalysisManifest& manifest);

} // namespace gridworth
