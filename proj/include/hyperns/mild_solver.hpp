#pragma once

#include "hyperns/constants.hpp"
#include "hyperns/fields.hpp"

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperns {

/// Lattice t_j = T (j/J)^2, j = 0..J.
std::vector<double> quadratic_lattice(double T, std::size_t J);

/// A divergence-free form written as star d (psi + chi): psi is the coexact stream function
/// and chi = sum r^m (a_m cos m theta + b_m sin m theta), r = tanh(rho/2), the potential of
/// its L^2-harmonic part. The assembled form is coclosed exactly at the discrete level.
struct DivFreeParts {
    NodeMatrix psi;
    NodeMatrix chi;
};

DivFreeParts split_divfree(const OneForm& u);
OneForm assemble_divfree(const GridPtr& grid, const DivFreeParts& parts);

/// P (nabla_{u^sharp} u)^flat for divergence-free u, returned in star d form.
OneForm nonlinear_term(const OneForm& u);

struct Trajectory {
    GridPtr grid;
    std::vector<double> times;
    std::vector<OneForm> states;
    std::string config_hash;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
    /// ||u(t_j)||_{L^q} for every lattice time.
    [[nodiscard]] std::vector<double> norms(double q) const;
    /// ||nabla u(t_j)||_{L^q} (frame Frobenius norm).
    [[nodiscard]] std::vector<double> gradient_norms(double q) const;
    /// Monotone cubic interpolation of the stored states in t.
    [[nodiscard]] OneForm at(double t) const;
};

/// Trajectory equal to a fixed form at every lattice time.
Trajectory constant_trajectory(const OneForm& u, const std::vector<double>& times);

/// Duhamel integrals I(t_j) = int_0^{t_j} e^{(t_j - s)L} F(s) ds on a lattice whose times are
/// integer multiples of a base step. F is interpolated in s by Bessel cubics through its
/// lattice values and integrated by a two-point Gauss rule on each base step, so only
/// three semigroup operators are ever needed.
class LatticeDuhamel {
public:
    LatticeDuhamel(GridPtr grid, std::vector<double> times);

    [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
    [[nodiscard]] double base_step() const noexcept { return eta_; }

    /// e^{t_j L} a at every lattice time.
    [[nodiscard]] std::vector<OneForm> free_evolution(const OneForm& a) const;
    /// e^{t_j L} w for a form that need not be coclosed: the exact part d alpha,
    /// alpha = (-Delta)^{-1} d* w, flows as e^{-2t} d e^{2t Delta} alpha.
    [[nodiscard]] std::vector<OneForm> free_evolution_general(const OneForm& w) const;
    /// I(t_j) for forcing samples F(t_j) (divergence-free).
    [[nodiscard]] std::vector<OneForm> integrate(const std::vector<OneForm>& forcing) const;
    /// Gv(t_j) = -int_0^{t_j} e^{(t_j-s)L} P(nabla_v v)(s) ds.
    [[nodiscard]] std::vector<OneForm> apply_G(const std::vector<OneForm>& v) const;

private:
    GridPtr grid_;
    std::vector<double> times_;
    std::vector<std::size_t> steps_;
    double eta_;
};

/// Raised when the Duhamel quadrature fails its node-doubling check.
class QuadratureNonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Gv(t) for an arbitrary t in the trajectory range. The s-integral uses the graded map
/// s = t (1 - cos(pi sigma)) / 2 (node density ~ distance^{-1/2} to either endpoint) with
/// Gauss-Legendre nodes in sigma, doubled until the relative change is <= 1e-4.
OneForm duhamel(const Trajectory& v, double t);

struct SolverConfig {
    double T = 5.0;
    std::size_t J = 32;
    double delta = 0.5;
    double tol = 1e-6;
    int max_iter = 25;
    /// Contraction constant used for the thresholds; <= 0 disables them.
    double contraction_constant = 0.0;
};

/// sup_j t_j^{(1-delta)/2} e^{t_j beta(delta)} ||v(t_j)||_{L^{2/delta}}.
double weighted_sup_norm(const std::vector<OneForm>& v, const std::vector<double>& times,
                         const DecayConstants& constants, double delta);

struct IterationRecord {
    int k = 0;
    double M_k = 0.0;
    double residual = 0.0;
    bool threshold_ok = true;
};

class DivergenceDetected : public std::runtime_error {
public:
    DivergenceDetected(const std::string& what, std::vector<IterationRecord> log)
        : std::runtime_error(what), log_(std::move(log)) {}
    [[nodiscard]] const std::vector<IterationRecord>& log() const noexcept { return log_; }

private:
    std::vector<IterationRecord> log_;
};

class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, std::vector<IterationRecord> log)
        : std::runtime_error(what), log_(std::move(log)) {}
    [[nodiscard]] const std::vector<IterationRecord>& log() const noexcept { return log_; }

private:
    std::vector<IterationRecord> log_;
};

struct PicardResult {
    Trajectory trajectory;
    std::vector<OneForm> free_solution;
    std::vector<IterationRecord> log;
};

/// u_{k+1} = u_0 + G u_k on the quadratic lattice until the sup-in-t relative L^2
/// change drops below tol. M_k is the weighted sup norm for the configured delta.
PicardResult picard_solve(const OneForm& a, const SolverConfig& config, const DecayConstants& constants);

/// sup_j ||u - u_0 - Gu||_{L^2}(t_j) / sup_j ||u||_{L^2}(t_j) re-evaluated on the returned trajectory.
double fixed_point_residual(const PicardResult& result);

struct ContractionMeasurement {
    double C_hat = 0.0;
    std::vector<double> ratios;
};

/// Max over probes of W(G u_0) / W(u_0)^2 with u_0 = e^{tL} probe and W the weighted sup norm.
ContractionMeasurement measure_contraction_constant(const std::vector<OneForm>& probes, const SolverConfig& config,
                                                    const DecayConstants& constants);

/// Datum plus `extra` random divergence-free probes, measured together.
ContractionMeasurement measure_contraction_constant(const GridPtr& grid, const DecayConstants& constants,
                                                    const SolverConfig& config, const OneForm& datum,
                                                    std::size_t extra, std::uint64_t seed);

/// Scale factor s such that the datum s * a has M_0 = fraction / (4 C_hat).
double calibrate_amplitude(const OneForm& a, double C_hat, double fraction, const SolverConfig& config,
                           const DecayConstants& constants);

}  // namespace hyperns
