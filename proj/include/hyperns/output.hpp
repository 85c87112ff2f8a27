#pragma once

#include "hyperns/estimates.hpp"
#include "hyperns/mild_solver.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace hyperns {

/// 16 hex digits of FNV-1a over the compact dump of the config.
std::string config_hash(const nlohmann::ordered_json& config);

/// Shortest round-trip decimal form ("%.17g"); "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double v);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

nlohmann::ordered_json report_to_json(const EstimateReport& r);
nlohmann::ordered_json iteration_log_to_json(const std::vector<IterationRecord>& log);

/// Writes `name` under dir together with the sidecar `<stem>.meta.json`
/// {file, config_hash, columns, rows}. Rows are written as given.
void write_csv(const std::filesystem::path& dir, const std::string& name, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows, const std::string& hash);

/// Pretty-printed JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& value);

/// norms.csv: columns t, q, norm; one row per (lattice time, q), q-major.
void write_norms(const std::filesystem::path& dir, const Trajectory& u, const std::vector<double>& qs,
                 const std::string& hash);

/// reports.csv: estimate_id, params_json, measured, predicted, margin, verdict.
void write_reports(const std::filesystem::path& dir, const std::vector<EstimateReport>& reports,
                   const std::string& hash);

/// iterations.json: [{k, M_k, residual, threshold_ok}, ...] plus iterations.meta.json.
void write_iterations(const std::filesystem::path& dir, const std::vector<IterationRecord>& log,
                      const std::string& hash);

}  // namespace hyperns
