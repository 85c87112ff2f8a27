#pragma once

#include "hyperns/estimates.hpp"
#include "hyperns/geometry.hpp"

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperns {

/// Malformed or inadmissible configuration; the message names the violated constraint.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ConstantsSection {
    int n = 2;
    double delta_n = 0.25;
    double c0 = 1.0;
    /// Exponents reported by the `constants` subcommand.
    double p = 2.0;
    double q = 4.0;
};

struct SolverSection {
    double T = 5.0;
    std::size_t J = 32;
    double delta = 0.5;
    double tol = 1e-6;
    int max_iter = 25;
    /// M_0 = amplitude / (4 C_hat) after calibration; must lie in (0, 1).
    double amplitude = 0.5;
    std::uint64_t seed = 7;
    /// Random probes added to the datum when measuring C_hat (drawn from seed + 4).
    std::size_t probes = 4;
};

struct EstimateRequest {
    EstimateId id = EstimateId::dispersive;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
};

struct RunConfig {
    GridSpec grid;
    ConstantsSection constants;
    SolverSection solver;
    std::vector<double> norms{2.0, 4.0, 8.0};
    std::vector<EstimateRequest> estimates;
    std::vector<double> kernel_times{0.1, 0.5, 1.0, 2.0};
    std::string output_dir = "out";
};

/// The estimates run when the config lists none: the H^2 suite, with the G_bound check at
/// the lattice time of index J/2. Empty for n != 2.
std::vector<EstimateRequest> default_estimates(const RunConfig& config);

/// Parses and validates. Unknown keys are rejected.
RunConfig parse_config(const nlohmann::ordered_json& j);
RunConfig load_config(const std::string& path);

/// Checks every admissibility constraint, including those of the requested estimates.
void validate(const RunConfig& config);

/// Canonical form (every field explicit). output_dir is excluded so the hash only depends on results.
nlohmann::ordered_json to_json(const RunConfig& config);

DecayConstants make_constants(const ConstantsSection& c);

}  // namespace hyperns
