#include "hyperns/mild_solver.hpp"

#include "hyperns/calculus.hpp"
#include "hyperns/heat_kernel.hpp"
#include "hyperns/interpolation.hpp"
#include "hyperns/leray.hpp"
#include "hyperns/parallel.hpp"
#include "hyperns/probes.hpp"
#include "hyperns/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace hyperns {

namespace {

Eigen::Index rows_of(const PolarGrid& g) { return static_cast<Eigen::Index>(g.n_rho()); }

NodeMatrix stack(const DivFreeParts& p) {
    const Eigen::Index r = p.psi.rows();
    NodeMatrix out(2 * r, p.psi.cols());
    out.topRows(r) = p.psi;
    out.bottomRows(r) = p.chi;
    return out;
}

DivFreeParts unstack(const NodeMatrix& m, Eigen::Index r) { return {m.topRows(r), m.bottomRows(r)}; }

NodeMatrix stack(const OneForm& u) {
    const Eigen::Index r = u.comp_rho().rows();
    NodeMatrix out(2 * r, u.comp_rho().cols());
    out.topRows(r) = u.comp_rho();
    out.bottomRows(r) = u.comp_theta();
    return out;
}

double sup_l2(const std::vector<OneForm>& v) {
    double s = 0.0;
    for (const auto& u : v) {
        s = std::max(s, lp_norm(u, 2.0));
    }
    return s;
}

}  // namespace

std::vector<double> quadratic_lattice(double T, std::size_t J) {
    if (!(T > 0.0) || J == 0) {
        throw std::invalid_argument("quadratic_lattice: need T > 0 and J >= 1");
    }
    std::vector<double> t(J + 1);
    for (std::size_t j = 0; j <= J; ++j) {
        const double x = static_cast<double>(j) / static_cast<double>(J);
        t[j] = T * x * x;
    }
    return t;
}

DivFreeParts split_divfree(const OneForm& u) {
    DivFreeParts p;
    p.psi = coexact_stream(u);
    p.chi = harmonic_potential(u - star_d(u.grid_ptr(), p.psi));
    return p;
}

OneForm assemble_divfree(const GridPtr& grid, const DivFreeParts& parts) {
    OneForm out = star_d(grid, pole_filter(*grid, parts.psi + parts.chi));
    out.mark_divergence_free(parts.psi);
    return out;
}

OneForm nonlinear_term(const OneForm& u) { return assemble_divfree(u.grid_ptr(), split_divfree(project(advection(u)))); }

std::vector<double> Trajectory::norms(double q) const {
    std::vector<double> out(states.size());
    parallel_for(states.size(), [&](std::size_t j) { out[j] = lp_norm(states[j], q); });
    return out;
}

std::vector<double> Trajectory::gradient_norms(double q) const {
    std::vector<double> out(states.size());
    parallel_for(states.size(), [&](std::size_t j) { out[j] = lp_norm(covariant_gradient(states[j]), q); });
    return out;
}

OneForm Trajectory::at(double t) const {
    if (states.empty()) {
        throw std::out_of_range("Trajectory::at: empty trajectory");
    }
    const auto hit = std::find(times.begin(), times.end(), t);
    if (hit != times.end()) {
        return states[static_cast<std::size_t>(hit - times.begin())];
    }
    std::vector<NodeMatrix> samples;
    samples.reserve(states.size());
    for (const auto& s : states) {
        samples.push_back(stack(s));
    }
    const NodeMatrix m = MonotoneCubic(times, std::move(samples))(t);
    const Eigen::Index r = rows_of(*grid);
    OneForm out(grid, m.topRows(r), m.bottomRows(r));
    out.mark_divergence_free();
    return out;
}

Trajectory constant_trajectory(const OneForm& u, const std::vector<double>& times) {
    Trajectory tr;
    tr.grid = u.grid_ptr();
    tr.times = times;
    tr.states.assign(times.size(), u);
    return tr;
}

LatticeDuhamel::LatticeDuhamel(GridPtr grid, std::vector<double> times)
    : grid_(std::move(grid)), times_(std::move(times)) {
    if (times_.size() < 2 || times_.front() != 0.0) {
        throw std::invalid_argument("LatticeDuhamel: lattice must start at 0 and have two or more times");
    }
    eta_ = times_[1];
    steps_.resize(times_.size());
    for (std::size_t j = 0; j < times_.size(); ++j) {
        const double k = times_[j] / eta_;
        const double kr = std::round(k);
        if (std::abs(k - kr) > 1e-9 * std::max(1.0, kr) || (j > 0 && kr <= static_cast<double>(steps_[j - 1]))) {
            throw std::invalid_argument("LatticeDuhamel: times must be increasing multiples of the first step");
        }
        steps_[j] = static_cast<std::size_t>(kr);
    }
}

std::vector<OneForm> LatticeDuhamel::free_evolution(const OneForm& a) const {
    const HeatSemigroup& heat = heat_semigroup(grid_);
    const auto P = heat.op(eta_);
    const double decay = std::exp(-2.0 * eta_);
    const DivFreeParts parts = split_divfree(a);

    std::vector<OneForm> out;
    out.reserve(times_.size());
    out.push_back(a);
    NodeMatrix psi = parts.psi;
    std::size_t k = 0;
    for (std::size_t j = 1; j < times_.size(); ++j) {
        for (; k < steps_[j]; ++k) {
            psi = decay * P->apply(*grid_, psi);
        }
        out.push_back(assemble_divfree(grid_, {psi, std::exp(-2.0 * times_[j]) * parts.chi}));
    }
    return out;
}

std::vector<OneForm> LatticeDuhamel::free_evolution_general(const OneForm& w) const {
    const ScalarField alpha = green_inverse_laplacian(codifferential(w));
    OneForm rest = w - exterior_derivative(alpha);
    rest.mark_divergence_free(recover_stream_function(w));
    std::vector<OneForm> out = free_evolution(rest);

    const auto P2 = heat_semigroup(grid_).op(2.0 * eta_);
    const double decay = std::exp(-2.0 * eta_);
    NodeMatrix phi = alpha.values();
    out[0] = w;
    std::size_t k = 0;
    for (std::size_t j = 1; j < times_.size(); ++j) {
        for (; k < steps_[j]; ++k) {
            phi = decay * P2->apply(*grid_, phi);
        }
        out[j] += exterior_derivative(ScalarField(grid_, phi));
    }
    return out;
}

std::vector<OneForm> LatticeDuhamel::integrate(const std::vector<OneForm>& forcing) const {
    if (forcing.size() != times_.size()) {
        throw std::invalid_argument("LatticeDuhamel::integrate: one forcing sample per lattice time required");
    }
    const Eigen::Index r = rows_of(*grid_);
    std::vector<NodeMatrix> samples(times_.size());
    parallel_for(times_.size(), [&](std::size_t j) { samples[j] = stack(split_divfree(forcing[j])); });
    const MonotoneCubic F(times_, samples, SlopeRule::bessel);

    // Two-point Gauss rule per base step. Both nodes lie inside the step, so every forcing
    // sample is smoothed by the heat flow before it enters the integral.
    const double g1 = 0.5 - std::sqrt(3.0) / 6.0;
    const double g2 = 0.5 + std::sqrt(3.0) / 6.0;
    const HeatSemigroup& heat = heat_semigroup(grid_);
    const auto P_step = heat.op(eta_);
    const auto P_long = heat.op(g2 * eta_);
    const auto P_short = heat.op(g1 * eta_);
    const double e_step = std::exp(-2.0 * eta_);
    const double e_long = std::exp(-2.0 * g2 * eta_);
    const double e_short = std::exp(-2.0 * g1 * eta_);
    const double w = 0.5 * eta_;

    std::vector<OneForm> out;
    out.reserve(times_.size());
    out.push_back(OneForm(grid_));
    out.back().mark_divergence_free(NodeMatrix::Zero(r, static_cast<Eigen::Index>(grid_->n_theta())));

    NodeMatrix psi = NodeMatrix::Zero(r, static_cast<Eigen::Index>(grid_->n_theta()));
    NodeMatrix chi = psi;
    std::size_t k = 0;
    for (std::size_t j = 1; j < times_.size(); ++j) {
        for (; k < steps_[j]; ++k) {
            const double s0 = static_cast<double>(k) * eta_;
            const DivFreeParts A = unstack(F(s0 + g1 * eta_), r);
            const DivFreeParts B = unstack(F(s0 + g2 * eta_), r);
            psi = e_step * P_step->apply(*grid_, psi) + (w * e_long) * P_long->apply(*grid_, A.psi) +
                  (w * e_short) * P_short->apply(*grid_, B.psi);
            chi = e_step * chi + w * (e_long * A.chi + e_short * B.chi);
        }
        out.push_back(assemble_divfree(grid_, {psi, chi}));
    }
    return out;
}

std::vector<OneForm> LatticeDuhamel::apply_G(const std::vector<OneForm>& v) const {
    std::vector<OneForm> forcing(v.size(), OneForm(grid_));
    parallel_for(v.size(), [&](std::size_t j) { forcing[j] = nonlinear_term(v[j]); });
    std::vector<OneForm> out = integrate(forcing);
    for (auto& u : out) {
        u *= -1.0;
    }
    return out;
}

OneForm duhamel(const Trajectory& v, double t) {
    if (v.states.empty() || t < v.times.front() || t > v.times.back()) {
        throw std::out_of_range("duhamel: t outside the trajectory range");
    }
    const GridPtr& grid = v.grid;
    OneForm zero(grid);
    zero.mark_divergence_free(NodeMatrix::Zero(rows_of(*grid), static_cast<Eigen::Index>(grid->n_theta())));
    if (t == 0.0) {
        return zero;
    }
    auto estimate = [&](std::size_t n) {
        const QuadratureRule rule = gauss_legendre(n, 0.0, 1.0);
        std::vector<OneForm> terms(n, OneForm(grid));
        parallel_for(n, [&](std::size_t i) {
            const double sigma = rule.nodes[i];
            const double s = 0.5 * t * (1.0 - std::cos(std::numbers::pi * sigma));
            const double jac = 0.5 * t * std::numbers::pi * std::sin(std::numbers::pi * sigma);
            const OneForm F = nonlinear_term(v.at(s));
            terms[i] = (-rule.weights[i] * jac) * apply_L_semigroup_divfree(F, t - s);
        });
        OneForm sum = zero;
        for (const auto& term : terms) {
            sum += term;
        }
        return sum;
    };
    OneForm coarse = estimate(16);
    for (std::size_t n = 32; n <= 64; n *= 2) {
        OneForm fine = estimate(n);
        const double scale = lp_norm(fine, 2.0);
        const double change = lp_norm(fine - coarse, 2.0);
        if (change <= 1e-4 * scale || scale == 0.0) {
            return fine;
        }
        coarse = std::move(fine);
    }
    std::ostringstream msg;
    msg << "duhamel: relative change under node doubling exceeds 1e-4 at t = " << t;
    throw QuadratureNonConvergence(msg.str());
}

double weighted_sup_norm(const std::vector<OneForm>& v, const std::vector<double>& times,
                         const DecayConstants& constants, double delta) {
    const double beta = constants.beta_main(delta);
    const double q = static_cast<double>(constants.n()) / delta;
    std::vector<double> w(v.size(), 0.0);
    parallel_for(v.size(), [&](std::size_t j) {
        if (times[j] > 0.0) {
            w[j] = std::pow(times[j], 0.5 * (1.0 - delta)) * std::exp(times[j] * beta) * lp_norm(v[j], q);
        }
    });
    return *std::max_element(w.begin(), w.end());
}

PicardResult picard_solve(const OneForm& a, const SolverConfig& config, const DecayConstants& constants) {
    const GridPtr& grid = a.grid_ptr();
    const LatticeDuhamel lattice(grid, quadratic_lattice(config.T, config.J));
    const auto& times = lattice.times();

    PicardResult result;
    result.free_solution = lattice.free_evolution(a);
    const double C = config.contraction_constant;
    const double bound = C > 0.0 ? 1.0 / (2.0 * C) : std::numeric_limits<double>::infinity();

    std::vector<OneForm> current = result.free_solution;
    const double M0 = weighted_sup_norm(current, times, constants, config.delta);
    result.log.push_back({0, M0, 0.0, M0 < bound});

    bool converged = false;
    for (int k = 1; k <= config.max_iter; ++k) {
        std::vector<OneForm> next = lattice.apply_G(current);
        std::vector<OneForm> diff(times.size(), OneForm(grid));
        for (std::size_t j = 0; j < times.size(); ++j) {
            next[j] += result.free_solution[j];
            diff[j] = next[j] - current[j];
        }
        next[0] = a;
        const double scale = sup_l2(next);
        const double residual = scale > 0.0 ? sup_l2(diff) / scale : 0.0;
        const double Mk = weighted_sup_norm(next, times, constants, config.delta);
        result.log.push_back({k, Mk, residual, Mk < bound});
        current = std::move(next);
        if (!std::isfinite(Mk) || Mk > 10.0 * bound) {
            std::ostringstream msg;
            msg << "picard_solve: M_" << k << " = " << Mk << " exceeds 10 M = " << 10.0 * bound;
            throw DivergenceDetected(msg.str(), result.log);
        }
        if (residual < config.tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "picard_solve: residual " << result.log.back().residual << " above tol " << config.tol << " after "
            << config.max_iter << " iterations";
        throw NonConvergence(msg.str(), result.log);
    }
    result.trajectory.grid = grid;
    result.trajectory.times = times;
    result.trajectory.states = std::move(current);
    return result;
}

double fixed_point_residual(const PicardResult& result) {
    const Trajectory& tr = result.trajectory;
    const LatticeDuhamel lattice(tr.grid, tr.times);
    const std::vector<OneForm> Gu = lattice.apply_G(tr.states);
    std::vector<OneForm> diff(tr.size(), OneForm(tr.grid));
    for (std::size_t j = 0; j < tr.size(); ++j) {
        diff[j] = tr.states[j] - result.free_solution[j] - Gu[j];
    }
    const double scale = sup_l2(tr.states);
    return scale > 0.0 ? sup_l2(diff) / scale : 0.0;
}

ContractionMeasurement measure_contraction_constant(const std::vector<OneForm>& probes, const SolverConfig& config,
                                                    const DecayConstants& constants) {
    ContractionMeasurement out;
    if (probes.empty()) {
        return out;
    }
    const LatticeDuhamel lattice(probes.front().grid_ptr(), quadratic_lattice(config.T, config.J));
    for (const auto& p : probes) {
        const std::vector<OneForm> u0 = lattice.free_evolution(p);
        const double W0 = weighted_sup_norm(u0, lattice.times(), constants, config.delta);
        if (W0 == 0.0) {
            continue;
        }
        const double WG = weighted_sup_norm(lattice.apply_G(u0), lattice.times(), constants, config.delta);
        out.ratios.push_back(WG / (W0 * W0));
        out.C_hat = std::max(out.C_hat, out.ratios.back());
    }
    return out;
}

ContractionMeasurement measure_contraction_constant(const GridPtr& grid, const DecayConstants& constants,
                                                    const SolverConfig& config, const OneForm& datum,
                                                    std::size_t extra, std::uint64_t seed) {
    std::vector<OneForm> probes{datum};
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < extra; ++i) {
        probes.push_back(random_divfree_field(grid, rng));
    }
    return measure_contraction_constant(probes, config, constants);
}

double calibrate_amplitude(const OneForm& a, double C_hat, double fraction, const SolverConfig& config,
                           const DecayConstants& constants) {
    const LatticeDuhamel lattice(a.grid_ptr(), quadratic_lattice(config.T, config.J));
    const double W = weighted_sup_norm(lattice.free_evolution(a), lattice.times(), constants, config.delta);
    if (!(W > 0.0) || !(C_hat > 0.0)) {
        throw std::invalid_argument("calibrate_amplitude: datum and contraction constant must be nonzero");
    }
    return fraction / (4.0 * C_hat * W);
}

}  // namespace hyperns
