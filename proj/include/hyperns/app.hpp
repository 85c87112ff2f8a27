#pragma once

#include "hyperns/estimates.hpp"
#include "hyperns/mild_solver.hpp"
#include "hyperns/run_config.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace hyperns {

inline constexpr int kExitOk = 0;
inline constexpr int kExitEstimateFailure = 1;
inline constexpr int kExitUsage = 2;

/// The calibrated small-data run every solution-level subcommand starts from.
struct SimulationRun {
    GridPtr grid;
    OneForm datum;
    ContractionMeasurement contraction;
    double scale = 0.0;
    PicardResult result;
};

/// Datum from the seed, C_hat from the datum plus the configured probes, amplitude
/// calibration, then the Picard solve on a lattice with J time steps.
/// Throws DivergenceDetected / NonConvergence from the solver.
SimulationRun simulate(const RunConfig& config);

/// Same datum, scale and C_hat as `base`, solved on the doubled time lattice.
PicardResult resolve_refined(const RunConfig& config, const SimulationRun& base);

/// Evaluates the configured estimates against a base run and its time refinement.
std::vector<EstimateReport> evaluate_estimates(const RunConfig& config, const SimulationRun& base);

/// Runs a subcommand and writes its artifacts into config.output_dir.
/// Returns kExitOk, kExitEstimateFailure or kExitUsage.
int run(const std::string& subcommand, const RunConfig& config, std::ostream& log);

const std::vector<std::string>& subcommands();

}  // namespace hyperns
