#include "hyperns/app.hpp"

#include "hyperns/heat_kernel.hpp"
#include "hyperns/output.hpp"
#include "hyperns/probes.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>

namespace hyperns {

namespace {

using json = nlohmann::ordered_json;

SolverConfig solver_config(const RunConfig& c, double C_hat) {
    SolverConfig s;
    s.T = c.solver.T;
    s.J = c.solver.J;
    s.delta = c.solver.delta;
    s.tol = c.solver.tol;
    s.max_iter = c.solver.max_iter;
    s.contraction_constant = C_hat;
    return s;
}

void require_surface(const RunConfig& c) {
    if (c.constants.n != 2) {
        throw ConfigError("the solver runs on H^2 only: constants.n must be 2");
    }
}

double get(const EstimateRequest& r, const char* key, double fallback = 0.0) {
    return r.params.contains(key) ? r.params.at(key).get<double>() : fallback;
}

json beta_entry(const std::function<double()>& f) {
    try {
        return f();
    } catch (const AdmissibilityError& e) {
        return json{{"inadmissible", e.what()}};
    }
}

json run_summary(const SimulationRun& run, const std::string& hash) {
    const auto& log = run.result.log;
    return json{{"config_hash", hash},
                {"C_hat", run.contraction.C_hat},
                {"contraction_ratios", run.contraction.ratios},
                {"scale", run.scale},
                {"M_0", log.front().M_k},
                {"M_bound", 1.0 / (2.0 * run.contraction.C_hat)},
                {"iterations", log.back().k},
                {"final_residual", log.back().residual},
                {"datum_L2", lp_norm(run.datum, 2.0)}};
}

int kernel_table(const RunConfig& c, const std::string& hash, std::ostream& log) {
    const GridPtr grid = PolarGrid::create(c.grid);
    std::vector<std::vector<std::string>> rows;
    for (const double t : c.kernel_times) {
        for (const double rho : grid->rho_nodes()) {
            rows.push_back({format_number(t), format_number(rho), format_number(kernel_h2(t, rho)),
                            format_number(kernel_h3(t, rho))});
        }
    }
    write_csv(c.output_dir, "kernel_table.csv", {"t", "rho", "h2", "h3"}, rows, hash);
    log << "kernel_table.csv: " << rows.size() << " rows\n";
    return kExitOk;
}

int constants_report(const RunConfig& c, const std::string& hash, std::ostream& log) {
    const DecayConstants k = make_constants(c.constants);
    const double p = c.constants.p, q = c.constants.q, d = c.solver.delta;
    json out{{"config_hash", hash}, {"n", k.n()}, {"delta_n", k.delta_n()}, {"c0", k.c0()},
             {"p", p},              {"q", q},     {"delta", d}};
    out["gamma"] = k.gamma(p, q);
    out["beta1"] = k.beta1(p, q);
    out["beta2"] = k.beta2(p);
    out["beta3"] = k.beta3(p, q);
    out["beta"] = beta_entry([&] { return k.beta_main(d); });
    out["beta_prime"] = beta_entry([&] { return k.beta_prime(d); });
    out["beta_dprime"] = beta_entry([&] { return k.beta_dprime(q, d); });
    out["beta_star"] = beta_entry([&] { return k.beta_star(p, d); });
    out["beta_dstar"] = beta_entry([&] { return k.beta_dstar(p, d); });
    for (const bool gradient : {false, true}) {
        json e;
        try {
            const LongTimeDecayPlan plan = plan_long_time_decay(k, p, q, gradient);
            e = json{{"shifted", plan.shifted},       {"p_eff", plan.p_eff},     {"delta", plan.delta},
                     {"delta_prime", plan.delta_p},   {"delta_star", plan.delta_s}, {"time_power", plan.time_power},
                     {"beta_tilde", plan.beta_tilde}};
        } catch (const AdmissibilityError& err) {
            e = json{{"inadmissible", err.what()}};
        }
        out[gradient ? "long_time_gradient" : "long_time"] = e;
    }
    write_json(std::filesystem::path(c.output_dir) / "constants.json", out);
    log << out.dump(2) << "\n";
    return kExitOk;
}

// Runs the base solve; on solver failure writes the iteration log and returns nothing.
std::optional<SimulationRun> try_simulate(const RunConfig& c, const std::string& hash, std::ostream& log) {
    try {
        std::optional<SimulationRun> run(simulate(c));
        run->result.trajectory.config_hash = hash;
        return run;
    } catch (const DivergenceDetected& e) {
        write_iterations(c.output_dir, e.log(), hash);
        log << e.what() << "\n";
    } catch (const NonConvergence& e) {
        write_iterations(c.output_dir, e.log(), hash);
        log << e.what() << "\n";
    }
    return std::nullopt;
}

int simulate_command(const RunConfig& c, const std::string& hash, std::ostream& log) {
    const auto run = try_simulate(c, hash, log);
    if (!run) {
        return kExitEstimateFailure;
    }
    write_norms(c.output_dir, run->result.trajectory, c.norms, hash);
    write_iterations(c.output_dir, run->result.log, hash);
    json summary = run_summary(*run, hash);
    summary["fixed_point_residual"] = fixed_point_residual(run->result);
    write_json(std::filesystem::path(c.output_dir) / "simulate.json", summary);
    log << summary.dump(2) << "\n";
    return kExitOk;
}

int summarize_reports(const RunConfig& c, const std::string& hash, const std::vector<EstimateReport>& reports,
                      const std::string& name, std::ostream& log) {
    write_reports(c.output_dir, reports, hash);
    json list = json::array();
    std::size_t passed = 0;
    for (const auto& r : reports) {
        list.push_back(report_to_json(r));
        passed += r.pass ? 1 : 0;
        log << (r.pass ? "pass " : "FAIL ") << estimate_name(r.id) << " " << r.params.dump()
            << " measured=" << format_number(r.measured) << " predicted=" << format_number(r.predicted) << "\n";
    }
    const bool all = passed == reports.size();
    write_json(std::filesystem::path(c.output_dir) / name,
               json{{"config_hash", hash}, {"all_pass", all}, {"passed", passed}, {"total", reports.size()},
                    {"reports", list}});
    log << passed << "/" << reports.size() << " estimates pass\n";
    return all ? kExitOk : kExitEstimateFailure;
}

int verify_command(const RunConfig& c, const std::string& hash, std::ostream& log) {
    const auto run = try_simulate(c, hash, log);
    if (!run) {
        return kExitEstimateFailure;
    }
    write_norms(c.output_dir, run->result.trajectory, c.norms, hash);
    write_iterations(c.output_dir, run->result.log, hash);
    return summarize_reports(c, hash, evaluate_estimates(c, *run), "reports.json", log);
}

int decay_command(const RunConfig& c, const std::string& hash, std::ostream& log) {
    const auto run = try_simulate(c, hash, log);
    if (!run) {
        return kExitEstimateFailure;
    }
    const DecayConstants k = make_constants(c.constants);
    const Trajectory& u = run->result.trajectory;
    const double n = k.n();
    std::vector<EstimateReport> reports;
    for (const double q : c.norms) {
        if (q == n) {
            reports.push_back(measure_decay(EstimateId::Ln_decay, u, q, 0.0, k.beta_prime(c.solver.delta),
                                            kLargeTimeWindow));
        } else {
            reports.push_back(measure_decay(EstimateId::Lp_decay, u, q, 0.0, k.beta_star(q, c.solver.delta),
                                            kLargeTimeWindow));
        }
    }
    write_norms(c.output_dir, u, c.norms, hash);
    write_iterations(c.output_dir, run->result.log, hash);
    return summarize_reports(c, hash, reports, "decay.json", log);
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"kernel-table", "constants", "simulate", "verify-estimates",
                                                "decay-report"};
    return names;
}

SimulationRun simulate(const RunConfig& c) {
    require_surface(c);
    const GridPtr grid = PolarGrid::create(c.grid);
    const DecayConstants k = make_constants(c.constants);
    std::mt19937_64 rng(c.solver.seed);
    const OneForm a = random_divfree_field(grid, rng);
    const SolverConfig base = solver_config(c, 0.0);
    ContractionMeasurement cm = measure_contraction_constant(grid, k, base, a, c.solver.probes, c.solver.seed + 4);
    const double scale = calibrate_amplitude(a, cm.C_hat, c.solver.amplitude, base, k);
    OneForm datum = scale * a;
    PicardResult result = picard_solve(datum, solver_config(c, cm.C_hat), k);
    return SimulationRun{grid, std::move(datum), std::move(cm), scale, std::move(result)};
}

PicardResult resolve_refined(const RunConfig& c, const SimulationRun& base) {
    SolverConfig s = solver_config(c, base.contraction.C_hat);
    s.J *= 2;
    return picard_solve(base.datum, s, make_constants(c.constants));
}

std::vector<EstimateReport> evaluate_estimates(const RunConfig& c, const SimulationRun& base) {
    const DecayConstants k = make_constants(c.constants);
    const double n = k.n();
    const double delta = c.solver.delta;
    const TimeGrid tg{c.solver.T, c.solver.J};
    const Trajectory& u = base.result.trajectory;
    std::optional<PicardResult> fine;
    std::optional<Trajectory> fine_first;
    auto refined = [&]() -> const PicardResult& {
        if (!fine) {
            fine = resolve_refined(c, base);
        }
        return *fine;
    };
    auto refined_first = [&]() -> const Trajectory& {
        if (!fine_first) {
            fine_first = refine_first_step(refined());
        }
        return *fine_first;
    };

    std::vector<EstimateReport> out;
    for (const auto& r : c.estimates) {
        try {
            switch (r.id) {
                case EstimateId::dispersive:
                    out.push_back(verify_dispersive(base.datum, get(r, "p"), get(r, "q"), tg, k));
                    break;
                case EstimateId::smoothing_p:
                    out.push_back(verify_smoothing(base.datum, get(r, "p"), get(r, "p"), tg, k));
                    break;
                case EstimateId::smoothing_pq:
                    out.push_back(verify_smoothing(base.datum, get(r, "p"), get(r, "q"), tg, k));
                    break;
                case EstimateId::div_smoothing:
                    out.push_back(verify_div_smoothing(base.datum, get(r, "p"), get(r, "q"), tg, k));
                    break;
                case EstimateId::G_bound:
                    out.push_back(verify_G_bound(u, refined().trajectory, get(r, "alpha"), get(r, "gamma"),
                                                 get(r, "zeta"), get(r, "t"), k));
                    break;
                case EstimateId::Ln_decay:
                    out.push_back(measure_decay(EstimateId::Ln_decay, u, n, 0.0, k.beta_prime(delta),
                                                kLargeTimeWindow));
                    out.push_back(verify_end_value(EstimateId::Ln_decay, u, n, get(r, "fraction", 0.01)));
                    break;
                case EstimateId::Lq_weighted: {
                    const double q = get(r, "q");
                    out.push_back(verify_weighted_bound(EstimateId::Lq_weighted, u, refined().trajectory, q,
                                                        0.5 - n / (2.0 * q), k.beta_main(delta), false,
                                                        kTimeRefinementVariation, "time"));
                    if (q > n) {
                        out.push_back(verify_small_time_vanishing(EstimateId::Lq_weighted, refined().trajectory, q,
                                                                  0.5 - n / (2.0 * q), false));
                    }
                    break;
                }
                case EstimateId::grad_weighted: {
                    const double q = get(r, "q");
                    const double d = get(r, "delta", 1.0 - n / (2.0 * q));
                    out.push_back(verify_weighted_bound(EstimateId::grad_weighted, u, refined().trajectory, q,
                                                        1.0 - n / (2.0 * q), k.beta_dprime(q, d), true,
                                                        kTimeRefinementVariation, "time"));
                    out.push_back(verify_small_time_vanishing(EstimateId::grad_weighted, refined().trajectory, q,
                                                              1.0 - n / (2.0 * q), true));
                    break;
                }
                case EstimateId::LrLq_member:
                    out.push_back(verify_space_time_membership(refined().trajectory, refined_first(), get(r, "r"),
                                                               get(r, "q"), k));
                    break;
                case EstimateId::Lp_decay: {
                    const double p = get(r, "p");
                    out.push_back(measure_decay(EstimateId::Lp_decay, u, p, 0.0, k.beta_star(p, delta),
                                                kLargeTimeWindow));
                    break;
                }
                case EstimateId::tmdcy2_rate:
                    out.push_back(verify_tmdcy2(u, refined().trajectory, get(r, "p"), get(r, "q"),
                                                r.params.value("gradient", false), k));
                    break;
            }
        } catch (const std::exception& e) {
            EstimateReport fail = make_report(r.id, r.params, std::numeric_limits<double>::quiet_NaN(), 0.0,
                                              Bound::upper, json{{"error", e.what()}});
            out.push_back(std::move(fail));
        }
    }
    return out;
}

int run(const std::string& subcommand, const RunConfig& config, std::ostream& log) {
    const std::string hash = config_hash(to_json(config));
    try {
        if (subcommand == "kernel-table") {
            return kernel_table(config, hash, log);
        }
        if (subcommand == "constants") {
            return constants_report(config, hash, log);
        }
        if (subcommand == "simulate") {
            return simulate_command(config, hash, log);
        }
        if (subcommand == "verify-estimates") {
            return verify_command(config, hash, log);
        }
        if (subcommand == "decay-report") {
            return decay_command(config, hash, log);
        }
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
    log << "unknown subcommand '" << subcommand << "'\n";
    return kExitUsage;
}

}  // namespace hyperns
