#include "hyperns/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hyperns {

namespace {

using json = nlohmann::ordered_json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    for (const auto& [k, v] : j.items()) {
        if (!allowed.count(k)) {
            throw ConfigError(where + ": unknown key '" + k + "'");
        }
    }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) {
        return;
    }
    const json& v = j.at(key);
    try {
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) {
                throw ConfigError("");
            }
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer() || (std::is_unsigned_v<T> && v.get<long long>() < 0)) {
                throw ConfigError("");
            }
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) {
                throw ConfigError("");
            }
        }
        out = v.get<T>();
    } catch (const std::exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
}

double param(const EstimateRequest& r, const char* key, double fallback) {
    if (!r.params.contains(key)) {
        return fallback;
    }
    return r.params.at(key).get<double>();
}

double required(const EstimateRequest& r, const char* key) {
    if (!r.params.contains(key)) {
        throw ConfigError(std::string(estimate_name(r.id)) + ": missing parameter '" + key + "'");
    }
    return r.params.at(key).get<double>();
}

const std::set<std::string>& allowed_params(EstimateId id) {
    static const std::set<std::string> pq{"p", "q"}, p{"p"}, q{"q"}, gq{"q", "delta"}, rq{"r", "q"},
        g{"alpha", "gamma", "zeta", "t"}, ln{"fraction"}, td{"p", "q", "gradient"};
    switch (id) {
        case EstimateId::dispersive:
        case EstimateId::smoothing_pq:
        case EstimateId::div_smoothing:
            return pq;
        case EstimateId::smoothing_p:
        case EstimateId::Lp_decay:
            return p;
        case EstimateId::Lq_weighted:
            return q;
        case EstimateId::grad_weighted:
            return gq;
        case EstimateId::LrLq_member:
            return rq;
        case EstimateId::G_bound:
            return g;
        case EstimateId::Ln_decay:
            return ln;
        case EstimateId::tmdcy2_rate:
            return td;
    }
    return p;
}

void validate_estimate(const EstimateRequest& r, const RunConfig& c, const DecayConstants& k) {
    const std::string name(estimate_name(r.id));
    const double n = c.constants.n;
    const double delta = c.solver.delta;
    for (const auto& [key, v] : r.params.items()) {
        const bool ok = key == "gradient" ? v.is_boolean() : v.is_number();
        if (!ok) {
            throw ConfigError(name + "." + key + ": wrong type");
        }
    }
    auto exponents = [&](double p, double q, bool strict) {
        if (!(strict ? p > 1.0 : p >= 1.0) || !(p <= q) || !std::isfinite(q)) {
            std::ostringstream msg;
            msg << name << " inadmissible: need " << (strict ? "1 < p" : "1 <= p") << " <= q < inf (p = " << p
                << ", q = " << q << ")";
            throw ConfigError(msg.str());
        }
    };
    switch (r.id) {
        case EstimateId::dispersive:
            exponents(required(r, "p"), required(r, "q"), false);
            break;
        case EstimateId::smoothing_p:
            exponents(required(r, "p"), required(r, "p"), true);
            break;
        case EstimateId::smoothing_pq:
        case EstimateId::div_smoothing:
            exponents(required(r, "p"), required(r, "q"), true);
            break;
        case EstimateId::G_bound: {
            const double alpha = required(r, "alpha"), gamma = required(r, "gamma"), zeta = required(r, "zeta");
            const double t = required(r, "t");
            if (!(gamma > 0.0) || !(alpha > 0.0) || !(zeta > 0.0) || !(gamma <= alpha + zeta) ||
                !(alpha + zeta < n)) {
                throw ConfigError("G_bound hypothesis violated: need 0 < gamma <= alpha + zeta < n");
            }
            if (!(alpha + zeta - gamma < 1.0)) {
                throw ConfigError("G_bound hypothesis violated: alpha + zeta - gamma >= 1 (non-integrable weight)");
            }
            const double j = std::sqrt(t / c.solver.T) * static_cast<double>(c.solver.J);
            if (!(t > 0.0) || t > c.solver.T || std::abs(j - std::round(j)) > 1e-9) {
                throw ConfigError("G_bound: t must be a positive lattice time T (j/J)^2");
            }
            break;
        }
        case EstimateId::Ln_decay: {
            const double f = param(r, "fraction", 0.01);
            if (!(f > 0.0 && f < 1.0)) {
                throw ConfigError("Ln_decay: fraction must lie in (0, 1)");
            }
            (void)k.beta_prime(delta);
            break;
        }
        case EstimateId::Lq_weighted:
            if (!(required(r, "q") >= n)) {
                throw ConfigError("Lq_weighted inadmissible: need q >= n");
            }
            break;
        case EstimateId::grad_weighted: {
            const double q = required(r, "q");
            if (!(q >= n)) {
                throw ConfigError("grad_weighted inadmissible: need q >= n");
            }
            (void)k.beta_dprime(q, param(r, "delta", 1.0 - n / (2.0 * q)));
            break;
        }
        case EstimateId::LrLq_member:
            try {
                classify_membership(c.constants.n, required(r, "r"), required(r, "q"));
            } catch (const HypothesisViolation& e) {
                throw ConfigError(e.what());
            }
            break;
        case EstimateId::Lp_decay: {
            const double p = required(r, "p");
            exponents(p, p, true);
            (void)k.beta_star(p, delta);
            break;
        }
        case EstimateId::tmdcy2_rate: {
            const bool gradient = r.params.value("gradient", false);
            plan_long_time_decay(k, required(r, "p"), required(r, "q"), gradient);
            break;
        }
    }
}

}  // namespace

std::vector<EstimateRequest> default_estimates(const RunConfig& c) {
    if (c.constants.n != 2) {
        return {};
    }
    const double half = static_cast<double>(c.solver.J / 2) / static_cast<double>(c.solver.J);
    const double t_mid = c.solver.T * half * half;
    auto req = [](EstimateId id, json params) { return EstimateRequest{id, std::move(params)}; };
    return {
        req(EstimateId::dispersive, {{"p", 2.0}, {"q", 2.0}}),
        req(EstimateId::dispersive, {{"p", 2.0}, {"q", 4.0}}),
        req(EstimateId::dispersive, {{"p", 2.0}, {"q", 8.0}}),
        req(EstimateId::smoothing_p, {{"p", 2.0}}),
        req(EstimateId::smoothing_pq, {{"p", 2.0}, {"q", 4.0}}),
        req(EstimateId::div_smoothing, {{"p", 2.0}, {"q", 4.0}}),
        req(EstimateId::G_bound, {{"alpha", 0.5}, {"gamma", 0.5}, {"zeta", 0.5}, {"t", t_mid}}),
        req(EstimateId::Ln_decay, json::object()),
        req(EstimateId::Lq_weighted, {{"q", 4.0}}),
        req(EstimateId::Lq_weighted, {{"q", 8.0}}),
        req(EstimateId::grad_weighted, {{"q", 4.0}}),
        req(EstimateId::grad_weighted, {{"q", 8.0}}),
        req(EstimateId::LrLq_member, {{"r", 4.0}, {"q", 4.0}}),
        req(EstimateId::LrLq_member, {{"r", 2.0}, {"q", 8.0}}),
        req(EstimateId::LrLq_member, {{"r", 2.0}, {"q", 2.0}}),
        req(EstimateId::Lp_decay, {{"p", 4.0}}),
        req(EstimateId::tmdcy2_rate, {{"p", 2.0}, {"q", 4.0}, {"gradient", false}}),
        req(EstimateId::tmdcy2_rate, {{"p", 2.0}, {"q", 4.0}, {"gradient", true}}),
    };
}

RunConfig parse_config(const nlohmann::ordered_json& j) {
    RunConfig c;
    reject_unknown(j, {"grid", "constants", "solver", "norms", "estimates", "kernel_times", "output_dir"}, "config");
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        reject_unknown(g, {"rho_max", "n_rho", "n_theta"}, "grid");
        read(g, "rho_max", c.grid.rho_max, "grid");
        read(g, "n_rho", c.grid.n_rho, "grid");
        read(g, "n_theta", c.grid.n_theta, "grid");
    }
    if (j.contains("constants")) {
        const json& k = j.at("constants");
        reject_unknown(k, {"n", "delta_n", "c0", "p", "q"}, "constants");
        read(k, "n", c.constants.n, "constants");
        c.constants.delta_n = 0.25 * (c.constants.n - 1.0) * (c.constants.n - 1.0);
        c.constants.c0 = c.constants.n - 1.0;
        read(k, "delta_n", c.constants.delta_n, "constants");
        read(k, "c0", c.constants.c0, "constants");
        read(k, "p", c.constants.p, "constants");
        read(k, "q", c.constants.q, "constants");
    }
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        reject_unknown(s, {"T", "J", "delta", "tol", "max_iter", "amplitude", "seed", "probes"}, "solver");
        read(s, "T", c.solver.T, "solver");
        read(s, "J", c.solver.J, "solver");
        read(s, "delta", c.solver.delta, "solver");
        read(s, "tol", c.solver.tol, "solver");
        read(s, "max_iter", c.solver.max_iter, "solver");
        read(s, "amplitude", c.solver.amplitude, "solver");
        read(s, "seed", c.solver.seed, "solver");
        read(s, "probes", c.solver.probes, "solver");
    }
    auto reals = [&](const char* key, std::vector<double>& out) {
        if (!j.contains(key)) {
            return;
        }
        const json& a = j.at(key);
        if (!a.is_array()) {
            throw ConfigError(std::string(key) + ": expected an array of numbers");
        }
        out.clear();
        for (const auto& v : a) {
            if (!v.is_number()) {
                throw ConfigError(std::string(key) + ": expected an array of numbers");
            }
            out.push_back(v.get<double>());
        }
    };
    reals("norms", c.norms);
    reals("kernel_times", c.kernel_times);
    if (j.contains("estimates")) {
        const json& list = j.at("estimates");
        if (!list.is_array()) {
            throw ConfigError("estimates: expected an array");
        }
        for (const auto& e : list) {
            if (!e.is_object() || !e.contains("id") || !e.at("id").is_string()) {
                throw ConfigError("estimates: every entry needs a string 'id'");
            }
            const auto id = parse_estimate_id(e.at("id").get<std::string>());
            if (!id) {
                throw ConfigError("estimates: unknown id '" + e.at("id").get<std::string>() + "'");
            }
            EstimateRequest r{*id, json::object()};
            std::set<std::string> allowed = allowed_params(*id);
            allowed.insert("id");
            reject_unknown(e, allowed, std::string("estimates.") + std::string(estimate_name(*id)));
            for (const auto& [k, v] : e.items()) {
                if (k != "id") {
                    r.params[k] = v;
                }
            }
            c.estimates.push_back(std::move(r));
        }
    } else {
        c.estimates = default_estimates(c);
    }
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string()) {
            throw ConfigError("output_dir: expected a string");
        }
        c.output_dir = j.at("output_dir").get<std::string>();
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

DecayConstants make_constants(const ConstantsSection& c) { return DecayConstants(c.n, c.delta_n, c.c0); }

void validate(const RunConfig& c) {
    if (!(c.grid.rho_max > kBoundaryMargin + 1.0)) {
        throw ConfigError("grid.rho_max must exceed the boundary margin + 1");
    }
    if (c.grid.n_rho < 8 || c.grid.n_theta < 8 || c.grid.n_theta % 2 != 0) {
        throw ConfigError("grid: need n_rho >= 8 and an even n_theta >= 8");
    }
    if (c.constants.n < 2) {
        throw ConfigError("constants.n must be at least 2");
    }
    if (!(c.constants.delta_n > 0.0) || !(c.constants.c0 > 0.0)) {
        throw ConfigError("constants: delta_n and c0 must be positive");
    }
    if (!(c.solver.T > 0.0) || c.solver.J < 2) {
        throw ConfigError("solver: need T > 0 and J >= 2");
    }
    if (!(c.solver.delta > 0.0 && c.solver.delta < 1.0)) {
        throw ConfigError("solver.delta must lie in (0, 1)");
    }
    if (!(c.solver.tol > 0.0) || c.solver.max_iter < 1) {
        throw ConfigError("solver: need tol > 0 and max_iter >= 1");
    }
    if (!(c.solver.amplitude > 0.0 && c.solver.amplitude < 1.0)) {
        throw ConfigError("solver.amplitude must lie in (0, 1): M_0 < 1/(4 C_hat) is required");
    }
    for (const double q : c.norms) {
        if (!(q >= 1.0) || !std::isfinite(q)) {
            throw ConfigError("norms: every q must satisfy 1 <= q < inf");
        }
    }
    for (const double t : c.kernel_times) {
        if (!(t > 0.0)) {
            throw ConfigError("kernel_times: every t must be positive");
        }
    }
    try {
        const DecayConstants k = make_constants(c.constants);
        (void)k.beta_main(c.solver.delta);
        for (const auto& r : c.estimates) {
            validate_estimate(r, c, k);
        }
    } catch (const AdmissibilityError& e) {
        throw ConfigError(e.what());
    } catch (const HypothesisViolation& e) {
        throw ConfigError(e.what());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("estimates: bad parameter (") + e.what() + ")");
    }
}

nlohmann::ordered_json to_json(const RunConfig& c) {
    json est = json::array();
    for (const auto& r : c.estimates) {
        json e{{"id", estimate_name(r.id)}};
        e.update(r.params);
        est.push_back(e);
    }
    return json{
        {"grid", {{"rho_max", c.grid.rho_max}, {"n_rho", c.grid.n_rho}, {"n_theta", c.grid.n_theta}}},
        {"constants",
         {{"n", c.constants.n}, {"delta_n", c.constants.delta_n}, {"c0", c.constants.c0}, {"p", c.constants.p},
          {"q", c.constants.q}}},
        {"solver",
         {{"T", c.solver.T},
          {"J", c.solver.J},
          {"delta", c.solver.delta},
          {"tol", c.solver.tol},
          {"max_iter", c.solver.max_iter},
          {"amplitude", c.solver.amplitude},
          {"seed", c.solver.seed},
          {"probes", c.solver.probes}}},
        {"norms", c.norms},
        {"estimates", est},
        {"kernel_times", c.kernel_times},
    };
}

}  // namespace hyperns
