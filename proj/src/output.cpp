#include "hyperns/output.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hyperns {

namespace {

using json = nlohmann::ordered_json;

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    return out;
}

// nlohmann writes non-finite numbers as null; keep them readable instead.
json number(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return format_number(v);
}

}  // namespace

std::string config_hash(const nlohmann::ordered_json& config) {
    const std::string s = config.dump();
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

nlohmann::ordered_json report_to_json(const EstimateReport& r) {
    json details = json::object();
    for (const auto& [k, v] : r.details.items()) {
        details[k] = v.is_number_float() ? number(v.get<double>()) : v;
    }
    return json{{"estimate_id", estimate_name(r.id)},
                {"params", r.params},
                {"measured", number(r.measured)},
                {"predicted", number(r.predicted)},
                {"margin", number(r.margin)},
                {"verdict", r.pass ? "pass" : "fail"},
                {"details", details}};
}

nlohmann::ordered_json iteration_log_to_json(const std::vector<IterationRecord>& log) {
    json out = json::array();
    for (const auto& r : log) {
        out.push_back({{"k", r.k}, {"M_k", number(r.M_k)}, {"residual", number(r.residual)},
                       {"threshold_ok", r.threshold_ok}});
    }
    return out;
}

void write_csv(const std::filesystem::path& dir, const std::string& name, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows, const std::string& hash) {
    std::ofstream out = open_for_write(dir / name);
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out << (c ? "," : "") << csv_field(columns[c]);
    }
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != columns.size()) {
            throw std::logic_error("write_csv: row width does not match the header of " + name);
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << csv_field(row[c]);
        }
        out << '\n';
    }
    const std::string stem = std::filesystem::path(name).stem().string();
    write_json(dir / (stem + ".meta.json"),
               json{{"file", name}, {"config_hash", hash}, {"columns", columns}, {"rows", rows.size()}});
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& value) {
    std::ofstream out = open_for_write(path);
    out << value.dump(2) << '\n';
}

void write_norms(const std::filesystem::path& dir, const Trajectory& u, const std::vector<double>& qs,
                 const std::string& hash) {
    std::vector<std::vector<std::string>> rows;
    for (const double q : qs) {
        const std::vector<double> v = u.norms(q);
        for (std::size_t j = 0; j < u.size(); ++j) {
            rows.push_back({format_number(u.times[j]), format_number(q), format_number(v[j])});
        }
    }
    write_csv(dir, "norms.csv", {"t", "q", "norm"}, rows, hash);
}

void write_reports(const std::filesystem::path& dir, const std::vector<EstimateReport>& reports,
                   const std::string& hash) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : reports) {
        rows.push_back({std::string(estimate_name(r.id)), r.params.dump(), format_number(r.measured),
                        format_number(r.predicted), format_number(r.margin), r.pass ? "pass" : "fail"});
    }
    write_csv(dir, "reports.csv", {"estimate_id", "params_json", "measured", "predicted", "margin", "verdict"}, rows,
              hash);
}

void write_iterations(const std::filesystem::path& dir, const std::vector<IterationRecord>& log,
                      const std::string& hash) {
    write_json(dir / "iterations.json", iteration_log_to_json(log));
    write_json(dir / "iterations.meta.json", json{{"file", "iterations.json"}, {"config_hash", hash}, {"rows", log.size()}});
}

}  // namespace hyperns
