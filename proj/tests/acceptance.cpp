// One pass/fail line per acceptance criterion at desk scale (H^2, 64x64 grid).

#include "hyperns/app.hpp"
#include "hyperns/calculus.hpp"
#include "hyperns/estimates.hpp"
#include "hyperns/heat_kernel.hpp"
#include "hyperns/leray.hpp"
#include "hyperns/one_form.hpp"
#include "hyperns/probes.hpp"
#include "hyperns/quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace hyperns;
using json = nlohmann::ordered_json;

namespace {

class Check {
public:
    void require(bool ok, const std::string& what) {
        ++checks_;
        if (!ok && first_failure_.empty()) {
            first_failure_ = what;
        }
        failed_ += ok ? 0 : 1;
    }
    void worst(const std::string& name, double value) {
        auto it = std::find_if(stats_.begin(), stats_.end(), [&](const auto& s) { return s.first == name; });
        if (it == stats_.end()) {
            stats_.emplace_back(name, value);
        } else {
            it->second = std::max(it->second, value);
        }
    }
    void note(const std::string& name, double value) { stats_.emplace_back(name, value); }
    [[nodiscard]] bool ok() const { return failed_ == 0; }
    [[nodiscard]] std::string summary() const {
        std::string s = std::to_string(checks_ - failed_) + "/" + std::to_string(checks_) + " checks";
        for (const auto& [k, v] : stats_) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.3g", v);
            s += ", " + k + " " + buf;
        }
        if (!first_failure_.empty()) {
            s += "; first failure: " + first_failure_;
        }
        return s;
    }

private:
    int checks_ = 0;
    int failed_ = 0;
    std::string first_failure_;
    std::vector<std::pair<std::string, double>> stats_;
};

double rel_l2(const OneForm& a, const OneForm& b, const OneForm& scale) {
    return lp_norm(a - b, 2.0) / lp_norm(scale, 2.0);
}

const GridPtr& desk() {
    static const GridPtr g = PolarGrid::create({2, 8.0, 64, 64});
    return g;
}

double radial_mass_h3(double t) {
    const QuadratureRule q = composite_gauss_legendre(16, 80, 0.0, 40.0);
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        s += q.weights[i] * kernel_h3(t, q.nodes[i]) * 4.0 * std::numbers::pi * volume_density(q.nodes[i], 3);
    }
    return s;
}

// Shared solution-level runs, built on first use.
struct Runs {
    RunConfig config = parse_config(json::object());
    SimulationRun base = simulate(config);
    PicardResult time_refined = resolve_refined(config, base);
};

Runs& runs() {
    static Runs r;
    return r;
}

Check heat_kernel_laws() {
    Check c;
    const double mass = radial_mass_h3(1.0);
    c.note("|h3 mass - 1|", std::abs(mass - 1.0));
    c.require(std::abs(mass - 1.0) < 1e-6, "H3 kernel mass");

    const auto& g = desk();
    const HeatSemigroup& h = heat_semigroup(g);
    const ScalarField one = ScalarField::sample(g, [](double, double) { return 1.0; });
    for (const double t : {0.01, 0.1, 1.0, 5.0}) {
        const double m = h.apply(one, t).values().maxCoeff();
        c.worst("grid mass", m);
        c.require(m <= 1.0 + 1e-3, "grid mass");
    }

    const ScalarField f = ScalarField::sample(g, [](double r, double th) {
        return std::exp(-r * r / 2) * (1 + 0.5 * std::cos(th) * r + 0.3 * std::sin(2 * th) * r * r);
    });
    const ScalarField b = h.apply(f, 1.0);
    const double comp = lp_norm(h.apply(h.apply(f, 0.4), 0.6) - b, 2.0) / lp_norm(b, 2.0);
    c.note("composition", comp);
    c.require(comp < 1e-3, "semigroup composition");

    std::mt19937_64 rng(101);
    for (int i = 0; i < 20; ++i) {
        const ScalarField u = random_unit_interval_field(g, rng);
        for (const double t : {0.1, 1.0}) {
            const ScalarField r = h.apply(u, t);
            c.require(r.values().minCoeff() >= 0.0, "Markov lower bound");
            c.require(r.values().maxCoeff() <= 1.0 + 1e-9, "Markov upper bound");
            c.worst("Markov max - 1", r.values().maxCoeff() - 1.0);
        }
    }
    return c;
}

Check projection_suite() {
    Check c;
    const auto& g = desk();
    std::mt19937_64 rng(202);
    for (int i = 0; i < 50; ++i) {
        const OneForm w = random_one_form(g, rng);
        const OneForm pw = project(w);
        const double idem = rel_l2(project(pw), pw, w);
        c.worst("idempotence", idem);
        c.require(idem < 1e-4, "idempotence");

        const ScalarField phi = random_bump(g, rng);
        const OneForm grad = exterior_derivative(phi);
        const double kill = lp_norm(project(grad), 2.0) / lp_norm(grad, 2.0);
        c.worst("gradients", kill);
        c.require(kill < 1e-2, "annihilates gradients");

        const OneForm u = random_divfree_field(g, rng);
        const double fix = rel_l2(project(u), u, u);
        c.worst("fixes div-free", fix);
        c.require(fix < 1e-5, "fixes divergence-free fields");

        for (const double t : {0.2, 1.0}) {
            const double comm = rel_l2(apply_L_semigroup_divfree(pw, t), project(apply_L_semigroup(w, t)), w);
            c.worst("commutation", comm);
            c.require(comm < 1e-3, "commutes with the semigroup");
        }
    }
    return c;
}

Check pointwise_domination() {
    Check c;
    const auto& g = desk();
    std::mt19937_64 rng(303);
    for (int i = 0; i < 20; ++i) {
        const OneForm u = random_divfree_field(g, rng);
        for (const double t : {0.2, 1.0}) {
            ScalarField lhs = apply_L_semigroup_divfree(u, t).pointwise_norm();
            lhs *= std::exp(t);
            const ScalarField rhs = apply_scalar_semigroup(u.pointwise_norm(), t);
            const double excess = (lhs.values() - rhs.values()).maxCoeff();
            c.worst("max excess", excess);
            c.require(excess <= 1e-6, "domination");
        }
    }
    return c;
}

Check constant_algebra() {
    Check c;
    int evaluated = 0;
    for (const int n : {2, 3}) {
        const DecayConstants k(n);
        for (const double p : {1.0, 1.5, 2.0, 3.0, 4.0}) {
            for (const double q : {1.0, 2.0, 4.0, 8.0, 16.0}) {
                if (q < p) {
                    continue;
                }
                c.require(k.beta1(p, q) > 0.0 && k.beta2(p) > 0.0 && k.beta3(p, q) > 0.0, "beta1-3 positive");
                for (int i = 1; i <= 9; ++i) {
                    const double d = 0.1 * i;
                    c.require(k.beta_main(d) > 0.0 && k.beta_prime(d) > 0.0, "beta, beta' positive");
                    if (q < n / (1.0 - d)) {
                        c.require(k.beta_dprime(q, d) > 0.0, "beta'' positive");
                    }
                    if (n / p + d < n) {
                        c.require(k.beta_star(p, d) > 0.0 && k.beta_dstar(p, d) > 0.0, "beta*, beta** positive");
                    }
                    ++evaluated;
                }
            }
        }
    }
    c.note("lattice points", evaluated);

    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int i = 0; i < 100; ++i) {
        const double x = u(rng), y = u(rng);
        const double ref = std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
        const double err = std::abs(beta_function(x, y) - ref) / ref;
        c.worst("Beta rel err", err);
        c.require(err < 1e-8, "Beta vs Gamma identity");
    }

    for (const double t : {0.5, 1.0, 2.0}) {
        for (const double d : {0.3, 0.5, 0.7}) {
            const double lhs = singular_integral(t, (1 + d) / 2, 1 - d);
            const double rhs = std::pow(t, -(1 - d) / 2) * beta_function(d, (1 - d) / 2);
            const double err = std::abs(lhs - rhs) / rhs;
            c.worst("singular integral rel err", err);
            c.require(err < 1e-6, "singular integral identity");
        }
    }
    return c;
}

Check picard_machinery() {
    Check c;
    const SimulationRun& run = runs().base;
    const double C = run.contraction.C_hat;
    const auto& log = run.result.log;
    c.note("C_hat", C);
    c.note("M_0", log.front().M_k);
    c.require(log.front().M_k < 1.0 / (4.0 * C), "M_0 < 1/(4 C_hat)");
    double M = 0.0;
    for (const auto& r : log) {
        c.require(r.M_k < 1.0 / (2.0 * C), "M_k < 1/(2 C_hat)");
        M = std::max(M, r.M_k);
    }
    for (std::size_t k = 2; k < log.size(); ++k) {
        const double ratio = log[k].residual / log[k - 1].residual;
        c.worst("residual ratio", ratio);
        c.require(ratio <= 2.0 * C * M + 0.1, "geometric residual decay");
    }
    const double fp = fixed_point_residual(run.result);
    c.note("fixed-point residual", fp);
    c.require(fp < 1e-6, "fixed-point residual");

    SolverConfig s;
    s.T = 1.0;
    s.J = 8;
    const DecayConstants k(2);
    auto K = [&](double eps) {
        const PicardResult r = picard_solve(eps * run.datum, s, k);
        double worst = 0.0;
        for (std::size_t j = 0; j < r.trajectory.size(); ++j) {
            worst = std::max(worst, lp_norm(r.trajectory.states[j] - r.free_solution[j], 2.0));
        }
        return worst;
    };
    const double ratio = K(0.5) / K(0.25);
    c.note("K(2e)/K(e)", ratio);
    c.require(ratio >= 3.5 && ratio <= 4.5, "quadratic remainder scaling");
    return c;
}

Check linear_decay() {
    Check c;
    const auto& g = desk();
    const DecayConstants k(2);
    const TimeGrid tg{5.0, 32};
    const auto times = tg.times();
    const LatticeDuhamel lattice(g, times);
    std::mt19937_64 rng(505);
    std::vector<OneForm> fields{runs().base.datum};
    for (int i = 0; i < 5; ++i) {
        fields.push_back(random_divfree_field(g, rng));
    }
    double slowest = INFINITY;
    for (const auto& a : fields) {
        std::vector<double> v;
        for (const auto& f : lattice.free_evolution(a)) {
            v.push_back(lp_norm(f, 2.0));
        }
        slowest = std::min(slowest, -fit_decay_rate(times, v, 0.0, {1.0, 5.0}));
    }
    c.note("slowest L2 rate", slowest);
    c.require(slowest >= 2.20, "L2 decay rate");
    for (const double q : {2.0, 4.0, 8.0}) {
        const EstimateReport r = verify_dispersive(runs().base.datum, 2.0, q, tg, k);
        c.worst("dispersive variation", r.measured);
        c.require(r.pass, "dispersive (2," + std::to_string(static_cast<int>(q)) + ") refinement");
    }
    return c;
}

Check nonlinear_decay() {
    Check c;
    const DecayConstants k(2);
    const double bp = k.beta_prime(0.5);
    RunConfig cfg = runs().config;
    cfg.solver.T = 5.0 / bp;
    // Keeps the base lattice step of the default run (T = 5, J = 32).
    cfg.solver.J = static_cast<std::size_t>(std::lround(32.0 * std::sqrt(cfg.solver.T / 5.0)));
    cfg.estimates.clear();
    const SimulationRun run = simulate(cfg);
    const Trajectory& u = run.result.trajectory;
    c.note("T_max", cfg.solver.T);
    const EstimateReport end = verify_end_value(EstimateId::Ln_decay, u, 2.0, 0.01);
    c.note("end ratio", end.measured);
    c.require(end.pass, "||u(T_max)|| < 0.01 ||a||");
    const EstimateReport rate = measure_decay(EstimateId::Ln_decay, u, 2.0, 0.0, bp, {1.0, cfg.solver.T});
    c.note("fitted rate", -rate.details.at("fitted_rate").get<double>());
    c.note("beta'", bp);
    c.require(rate.pass, "fitted rate >= beta' - 0.05");
    return c;
}

Check weighted_bounds() {
    Check c;
    const DecayConstants k(2);
    Runs& r = runs();
    const Trajectory& u = r.base.result.trajectory;
    const Trajectory& fine = r.time_refined.trajectory;

    GridSpec spec = r.config.grid;
    spec.n_rho = 128;
    spec.n_theta = 128;
    const GridPtr g2 = PolarGrid::create(spec);
    std::mt19937_64 rng(r.config.solver.seed);
    SolverConfig s;
    s.T = r.config.solver.T;
    s.J = r.config.solver.J;
    s.contraction_constant = r.base.contraction.C_hat;
    const PicardResult spatial = picard_solve(r.base.scale * random_divfree_field(g2, rng), s, k);

    for (const double q : {4.0, 8.0}) {
        const std::string tag = " q=" + std::to_string(static_cast<int>(q));
        const double w = 0.5 - 1.0 / q;
        const double beta = k.beta_main(0.5);
        const EstimateReport t = verify_weighted_bound(EstimateId::Lq_weighted, u, fine, q, w, beta, false,
                                                       kTimeRefinementVariation, "time");
        const EstimateReport x = verify_weighted_bound(EstimateId::Lq_weighted, u, spatial.trajectory, q, w, beta,
                                                       false, kSpaceRefinementVariation, "space");
        const EstimateReport v = verify_small_time_vanishing(EstimateId::Lq_weighted, fine, q, w, false);
        c.worst("time variation", t.measured);
        c.worst("space variation", x.measured);
        c.worst("small-t ratio", v.measured);
        c.require(t.pass, "time refinement" + tag);
        c.require(x.pass, "space refinement" + tag);
        c.require(v.pass, "small-time vanishing" + tag);

        const double wg = 1.0 - 1.0 / q;
        const double bg = k.beta_dprime(q, 1.0 - 1.0 / q);
        const EstimateReport gt = verify_weighted_bound(EstimateId::grad_weighted, u, fine, q, wg, bg, true,
                                                        kTimeRefinementVariation, "time");
        const EstimateReport gx = verify_weighted_bound(EstimateId::grad_weighted, u, spatial.trajectory, q, wg, bg,
                                                        true, kSpaceRefinementVariation, "space");
        const EstimateReport gv = verify_small_time_vanishing(EstimateId::grad_weighted, fine, q, wg, true);
        c.worst("time variation", gt.measured);
        c.worst("space variation", gx.measured);
        c.worst("small-t ratio", gv.measured);
        c.require(gt.pass, "gradient time refinement" + tag);
        c.require(gx.pass, "gradient space refinement" + tag);
        c.require(gv.pass, "gradient small-time vanishing" + tag);
    }
    return c;
}

Check space_time_membership() {
    Check c;
    const DecayConstants k(2);
    const PicardResult& fine = runs().time_refined;
    const Trajectory refined = refine_first_step(fine);
    const std::vector<std::pair<double, double>> pairs{{4.0, 4.0}, {2.0, 8.0}, {1.0, 2.0}, {2.0, 2.0}, {6.0, 2.0}};
    for (const auto& [r, q] : pairs) {
        const EstimateReport m = verify_space_time_membership(fine.trajectory, refined, r, q, k);
        c.worst("endpoint change", m.measured);
        char tag[48];
        std::snprintf(tag, sizeof tag, "(r, q) = (%g, %g)", r, q);
        c.require(std::isfinite(m.details.at("integral").get<double>()) && m.pass, tag);
    }
    return c;
}

Check branch_logic() {
    Check c;
    std::mt19937_64 rng(1011);
    std::uniform_int_distribution<int> dim(2, 3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int shifted = 0;
    for (int i = 0; i < 100; ++i) {
        const int n = dim(rng);
        const double p = 1.0 + 1e-3 + (n - 1.0 - 2e-3) * u(rng);
        const double q = p + 40.0 * u(rng);
        const bool gradient = u(rng) < 0.5;
        LongTimeDecayPlan plan;
        try {
            plan = plan_long_time_decay(DecayConstants(n), p, q, gradient);
        } catch (const std::exception& e) {
            c.require(false, std::string("no plan: ") + e.what());
            continue;
        }
        const double g = gradient ? 0.5 : 0.0;
        c.require(plan.beta_tilde > 0.0, "beta~ positive");
        if (0.5 * (n / p - n / q) + g < 1.0) {
            c.require(!plan.shifted && plan.p_eff == p, "direct branch keeps p");
            continue;
        }
        ++shifted;
        c.require(plan.shifted, "shifted branch selected");
        c.require(p < plan.p_eff && plan.p_eff < n && plan.p_eff <= q, "p < p' < n, p' <= q");
        const double lead = 0.5 * (n / plan.p_eff - n / q) + g;
        c.require(std::abs(lead - (1.0 - plan.eps)) < 1e-12, "exponent equals 1 - eps");
    }
    c.note("shifted probes", shifted);
    for (const auto& [p, q] : std::vector<std::pair<double, double>>{{1.0, 4.0}, {0.5, 2.0}, {3.0, 2.0}}) {
        bool threw = false;
        try {
            (void)plan_long_time_decay(DecayConstants(2), p, q, false);
        } catch (const AdmissibilityError&) {
            threw = true;
        }
        c.require(threw, "inadmissible (p, q) rejected");
    }
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
        {"heat-kernel laws", heat_kernel_laws},
        {"projection suite", projection_suite},
        {"pointwise domination", pointwise_domination},
        {"constant algebra", constant_algebra},
        {"Picard machinery", picard_machinery},
        {"linear decay rates", linear_decay},
        {"nonlinear decay", nonlinear_decay},
        {"weighted boundedness and small-t vanishing", weighted_bounds},
        {"space-time membership", space_time_membership},
        {"long-time branch logic", branch_logic},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        bool ok = false;
        std::string summary;
        try {
            const Check c = criteria[i].second();
            ok = c.ok();
            summary = c.summary();
        } catch (const std::exception& e) {
            summary = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %zu %s: %s (%s; %.0f s)\n", i + 1, criteria[i].first.c_str(), ok ? "PASS" : "FAIL",
                    summary.c_str(), secs);
        std::fflush(stdout);
        failed += ok ? 0 : 1;
    }
    std::printf("%zu/%zu criteria pass\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
