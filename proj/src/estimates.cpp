#include "hyperns/estimates.hpp"

#include "hyperns/interpolation.hpp"
#include "hyperns/one_form.hpp"
#include "hyperns/parallel.hpp"
#include "hyperns/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace hyperns {

namespace {

using json = nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::array<std::string_view, 11> kNames{
    "dispersive", "smoothing_p", "smoothing_pq", "div_smoothing", "G_bound",    "Ln_decay",
    "Lq_weighted", "grad_weighted", "LrLq_member", "Lp_decay",     "tmdcy2_rate",
};

void require_exponents(double p, double q, bool strict, const char* what) {
    const bool ok = strict ? p > 1.0 : p >= 1.0;
    if (!ok || !(p <= q) || !std::isfinite(q)) {
        std::ostringstream msg;
        msg << what << ": need " << (strict ? "1 < p" : "1 <= p") << " <= q < inf, got p = " << p
            << ", q = " << q;
        throw AdmissibilityError(msg.str());
    }
}

double sup_positive(const std::vector<double>& times, const std::vector<double>& w) {
    double s = 0.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (times[j] > 0.0) {
            if (!std::isfinite(w[j])) {
                return kInf;
            }
            s = std::max(s, w[j]);
        }
    }
    return s;
}

std::vector<double> weighted(const std::vector<double>& times, const std::vector<double>& values, double power,
                             double beta) {
    std::vector<double> w(times.size(), 0.0);
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (times[j] > 0.0) {
            w[j] = std::pow(times[j], power) * std::exp(times[j] * beta) * values[j];
        }
    }
    return w;
}

std::vector<double> series(const Trajectory& u, double q, bool gradient) {
    return gradient ? u.gradient_norms(q) : u.norms(q);
}

std::vector<double> lattice_norms(const std::vector<OneForm>& v, double q) {
    std::vector<double> out(v.size());
    parallel_for(v.size(), [&](std::size_t j) { out[j] = lp_norm(v[j], q); });
    return out;
}

std::vector<double> lattice_gradient_norms(const std::vector<OneForm>& v, double q) {
    std::vector<double> out(v.size());
    parallel_for(v.size(), [&](std::size_t j) { out[j] = lp_norm(covariant_gradient(v[j]), q); });
    return out;
}

std::size_t lattice_index(const std::vector<double>& times, double t) {
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (std::abs(times[j] - t) <= 1e-12 * std::max(1.0, t)) {
            return j;
        }
    }
    std::ostringstream msg;
    msg << "t = " << t << " is not a lattice time";
    throw std::invalid_argument(msg.str());
}

EstimateReport linear_report(EstimateId id, json params, const std::vector<double>& tc, const std::vector<double>& rc,
                             const std::vector<double>& rf) {
    const double sc = *std::max_element(rc.begin(), rc.end());
    const double sf = *std::max_element(rf.begin(), rf.end());
    const auto at = static_cast<std::size_t>(std::max_element(rc.begin(), rc.end()) - rc.begin());
    json details;
    details["sup_ratio"] = sc;
    details["sup_ratio_refined"] = sf;
    details["t_of_sup"] = tc[at];
    return make_report(id, std::move(params), variation(sc, sf), kTimeRefinementVariation, Bound::upper,
                       std::move(details));
}

}  // namespace

std::string_view estimate_name(EstimateId id) { return kNames[static_cast<std::size_t>(id)]; }

std::optional<EstimateId> parse_estimate_id(std::string_view name) {
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) {
            return static_cast<EstimateId>(i);
        }
    }
    return std::nullopt;
}

EstimateReport make_report(EstimateId id, nlohmann::ordered_json params, double measured, double predicted,
                           Bound bound, nlohmann::ordered_json details) {
    EstimateReport r;
    r.id = id;
    r.params = std::move(params);
    r.measured = measured;
    r.predicted = predicted;
    r.margin = bound == Bound::upper ? predicted - measured : measured - predicted;
    r.pass = std::isfinite(measured) && r.margin >= 0.0;
    r.details = std::move(details);
    return r;
}

double variation(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0) {
        return kInf;
    }
    if (a == 0.0 && b == 0.0) {
        return 1.0;
    }
    const double lo = std::min(a, b);
    return lo == 0.0 ? kInf : std::max(a, b) / lo;
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("least_squares: need two or more points");
    }
    const double m = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / m;
    const double my = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("least_squares: abscissae coincide");
    }
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.points = x.size();
    return f;
}

double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values, double weight_power,
                      FitWindow window) {
    std::vector<double> x, y;
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double t = times[j];
        if (t > 0.0 && t >= window.lo && t <= window.hi) {
            if (!(values[j] > 0.0)) {
                throw std::domain_error("fit_decay_rate: non-positive norm in the fit window");
            }
            x.push_back(t);
            y.push_back(weight_power * std::log(t) + std::log(values[j]));
        }
    }
    if (x.size() < 2) {
        throw std::invalid_argument("fit_decay_rate: fewer than two lattice times in the fit window");
    }
    return least_squares(x, y).slope;
}

double fit_power_exponent(const std::vector<double>& times, const std::vector<double>& values, FitWindow window) {
    std::vector<double> x, y;
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double t = times[j];
        if (t > 0.0 && t >= window.lo && t <= window.hi) {
            if (!(values[j] > 0.0)) {
                throw std::domain_error("fit_power_exponent: non-positive value in the fit window");
            }
            x.push_back(std::log(t));
            y.push_back(std::log(values[j]));
        }
    }
    if (x.size() < 2) {
        throw std::invalid_argument("fit_power_exponent: fewer than two lattice times in the fit window");
    }
    return least_squares(x, y).slope;
}

std::vector<double> dispersive_ratios(const OneForm& a, double p, double q, const std::vector<double>& times,
                                      const DecayConstants& constants) {
    require_exponents(p, q, false, "dispersive");
    const double n = constants.n();
    const double base = lp_norm(a, p);
    const auto flow = LatticeDuhamel(a.grid_ptr(), times).free_evolution(a);
    const double power = 0.5 * n * (1.0 / p - 1.0 / q);
    std::vector<double> r = weighted(times, lattice_norms(flow, q), power, constants.beta1(p, q));
    if (power == 0.0) {
        r[0] = lp_norm(a, q);
    }
    for (auto& v : r) {
        v = base > 0.0 ? v / base : 0.0;
    }
    return r;
}

std::vector<double> smoothing_ratios(const OneForm& a, double p, double q, const std::vector<double>& times,
                                     const DecayConstants& constants) {
    require_exponents(p, q, true, "smoothing");
    const double n = constants.n();
    const double base = lp_norm(a, p);
    const auto flow = LatticeDuhamel(a.grid_ptr(), times).free_evolution(a);
    const bool same = p == q;
    const double power = same ? 0.5 : 0.5 * n * (1.0 / p - 1.0 / q + 1.0 / n);
    const double beta = same ? constants.beta2(p) : constants.beta3(p, q);
    std::vector<double> r = weighted(times, lattice_gradient_norms(flow, q), power, beta);
    for (auto& v : r) {
        v = base > 0.0 ? v / base : 0.0;
    }
    return r;
}

std::vector<double> div_smoothing_ratios(const OneForm& a, double p, double q, const std::vector<double>& times,
                                         const DecayConstants& constants) {
    require_exponents(p, q, true, "div_smoothing");
    const double n = constants.n();
    const double tensor = std::pow(lp_norm(a, 2.0 * p), 2.0);
    // For coclosed a, nabla^*(a (x) a) = -(nabla_a a)^flat.
    OneForm forcing = advection(a);
    forcing *= -1.0;
    const auto flow = LatticeDuhamel(a.grid_ptr(), times).free_evolution_general(forcing);
    const double power = 0.5 * n * (1.0 / p - 1.0 / q + 1.0 / n);
    std::vector<double> r = weighted(times, lattice_norms(flow, q), power, constants.beta3(p, q));
    for (auto& v : r) {
        v = tensor > 0.0 ? v / tensor : 0.0;
    }
    return r;
}

EstimateReport verify_dispersive(const OneForm& a, double p, double q, const TimeGrid& grid,
                                 const DecayConstants& constants) {
    const auto tc = grid.times();
    const auto rc = dispersive_ratios(a, p, q, tc, constants);
    const auto rf = dispersive_ratios(a, p, q, grid.refined().times(), constants);
    json params{{"n", constants.n()}, {"p", p}, {"q", q}, {"T", grid.T}, {"J", grid.J}};
    return linear_report(EstimateId::dispersive, std::move(params), tc, rc, rf);
}

EstimateReport verify_smoothing(const OneForm& a, double p, double q, const TimeGrid& grid,
                                const DecayConstants& constants) {
    const auto tc = grid.times();
    const auto rc = smoothing_ratios(a, p, q, tc, constants);
    const auto rf = smoothing_ratios(a, p, q, grid.refined().times(), constants);
    json params{{"n", constants.n()}, {"p", p}, {"q", q}, {"T", grid.T}, {"J", grid.J}};
    return linear_report(p == q ? EstimateId::smoothing_p : EstimateId::smoothing_pq, std::move(params), tc, rc, rf);
}

EstimateReport verify_div_smoothing(const OneForm& a, double p, double q, const TimeGrid& grid,
                                    const DecayConstants& constants) {
    const auto tc = grid.times();
    const auto rc = div_smoothing_ratios(a, p, q, tc, constants);
    const auto rf = div_smoothing_ratios(a, p, q, grid.refined().times(), constants);
    json params{{"n", constants.n()}, {"p", p}, {"q", q}, {"T", grid.T}, {"J", grid.J}};
    return linear_report(EstimateId::div_smoothing, std::move(params), tc, rc, rf);
}

EstimateReport measure_decay(EstimateId id, const std::vector<double>& times, const std::vector<double>& values,
                             double weight_power, double beta_expected, FitWindow window, double tolerance) {
    if (times.empty() || times.back() < window.hi) {
        throw std::invalid_argument("measure_decay: trajectory ends before the fit window");
    }
    const double rate = fit_decay_rate(times, values, weight_power, window);
    const double sup = sup_positive(times, weighted(times, values, weight_power, beta_expected));
    json params{{"weight_power", weight_power}, {"beta", beta_expected},
                {"window_lo", window.lo},       {"window_hi", window.hi},
                {"tolerance", tolerance}};
    json details{{"fitted_rate", rate}, {"weighted_sup", sup}};
    return make_report(id, std::move(params), std::isfinite(sup) ? rate : kInf, -beta_expected + tolerance,
                       Bound::upper, std::move(details));
}

EstimateReport measure_decay(EstimateId id, const Trajectory& u, double q, double weight_power,
                             double beta_expected, FitWindow window, bool gradient, double tolerance) {
    EstimateReport r =
        measure_decay(id, u.times, series(u, q, gradient), weight_power, beta_expected, window, tolerance);
    json params{{"q", q}, {"gradient", gradient}};
    params.update(r.params);
    r.params = std::move(params);
    return r;
}

EstimateReport verify_end_value(EstimateId id, const Trajectory& u, double q, double fraction) {
    if (u.states.empty()) {
        throw std::invalid_argument("verify_end_value: empty trajectory");
    }
    const double start = lp_norm(u.states.front(), q);
    const double end = lp_norm(u.states.back(), q);
    const double ratio = start > 0.0 ? end / start : 0.0;
    json params{{"q", q}, {"t_end", u.times.back()}, {"fraction", fraction}};
    json details{{"norm_start", start}, {"norm_end", end}};
    return make_report(id, std::move(params), ratio, fraction, Bound::upper, std::move(details));
}

EstimateReport verify_weighted_bound(EstimateId id, const Trajectory& coarse, const Trajectory& fine, double q,
                                     double weight_power, double beta, bool gradient, double max_variation,
                                     const std::string& refinement) {
    const double sc = sup_positive(coarse.times, weighted(coarse.times, series(coarse, q, gradient), weight_power, beta));
    const double sf = sup_positive(fine.times, weighted(fine.times, series(fine, q, gradient), weight_power, beta));
    json params{{"q", q},           {"weight_power", weight_power}, {"beta", beta},
                {"gradient", gradient}, {"refinement", refinement}};
    json details{{"sup", sc}, {"sup_refined", sf}};
    return make_report(id, std::move(params), variation(sc, sf), max_variation, Bound::upper, std::move(details));
}

EstimateReport verify_small_time_vanishing(EstimateId id, const Trajectory& u, double q, double weight_power,
                                           bool gradient) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < u.size() && idx.size() < 3; ++j) {
        if (u.times[j] > 0.0) {
            idx.push_back(j);
        }
    }
    if (idx.size() < 3) {
        throw std::invalid_argument("verify_small_time_vanishing: need three positive lattice times");
    }
    std::vector<double> w;
    json values = json::array();
    for (const std::size_t j : idx) {
        const OneForm& s = u.states[j];
        const double norm = gradient ? lp_norm(covariant_gradient(s), q) : lp_norm(s, q);
        w.push_back(std::pow(u.times[j], weight_power) * norm);
        values.push_back(w.back());
    }
    const double worst = std::max(w[0] / w[1], w[1] / w[2]);
    json params{{"q", q}, {"weight_power", weight_power}, {"gradient", gradient}, {"check", "small_time"}};
    json details{{"weighted_values", values}, {"t_first", u.times[idx[0]]}};
    return make_report(id, std::move(params), worst, 1.0, Bound::upper, std::move(details));
}

double G_bound_integral(double t, double kappa, double beta4, const std::function<double(double)>& product) {
    if (!(kappa < 1.0)) {
        throw HypothesisViolation("G_bound_integral: weight (t-s)^{-kappa} is not integrable for kappa >= 1");
    }
    if (!(t > 0.0)) {
        return 0.0;
    }
    const auto f = [&](double s, double, double to_b) {
        return std::pow(to_b, -kappa) * std::exp(-to_b * beta4) * product(s);
    };
    return tanh_sinh(f, 0.0, t, 1e-10, 10).value;
}

GBoundSides G_bound_sides(const Trajectory& u, double alpha, double gamma, double zeta, double t,
                          const DecayConstants& constants) {
    const double n = constants.n();
    if (!(gamma > 0.0) || !(alpha > 0.0) || !(zeta > 0.0) || !(gamma <= alpha + zeta) || !(alpha + zeta < n)) {
        std::ostringstream msg;
        msg << "G_bound: need 0 < gamma <= alpha + zeta < n with alpha, zeta > 0 (alpha = " << alpha
            << ", gamma = " << gamma << ", zeta = " << zeta << ")";
        throw HypothesisViolation(msg.str());
    }
    const double kappa = 0.5 * (alpha + zeta - gamma + 1.0);
    if (!(kappa < 1.0)) {
        throw HypothesisViolation("G_bound: alpha + zeta - gamma >= 1 makes the time weight non-integrable");
    }
    const std::size_t j = lattice_index(u.times, t);
    GBoundSides out;
    if (j == 0) {
        return out;
    }
    const double beta4 = constants.beta3(n / (alpha + zeta), n / gamma);
    const auto Gu = LatticeDuhamel(u.grid, u.times).apply_G(u.states);
    out.left = lp_norm(Gu[j], n / gamma);

    const auto na = u.norms(n / alpha);
    const auto nz = u.norms(n / zeta);
    std::vector<Eigen::MatrixXd> prod(u.size(), Eigen::MatrixXd(1, 1));
    for (std::size_t i = 0; i < u.size(); ++i) {
        prod[i](0, 0) = na[i] * nz[i];
    }
    const MonotoneCubic P(u.times, std::move(prod));
    out.right = G_bound_integral(t, kappa, beta4, [&](double s) { return P(s)(0, 0); });
    if (out.right > 0.0) {
        out.constant = out.left / out.right;
    } else {
        out.constant = out.left > 0.0 ? kInf : 0.0;
    }
    return out;
}

EstimateReport verify_G_bound(const Trajectory& coarse, const Trajectory& fine, double alpha, double gamma,
                              double zeta, double t, const DecayConstants& constants, double max_variation) {
    const GBoundSides c = G_bound_sides(coarse, alpha, gamma, zeta, t, constants);
    const GBoundSides f = G_bound_sides(fine, alpha, gamma, zeta, t, constants);
    json params{{"n", constants.n()}, {"alpha", alpha}, {"gamma", gamma}, {"zeta", zeta}, {"t", t}};
    json details{{"left", c.left},           {"right", c.right},          {"constant", c.constant},
                 {"left_refined", f.left},   {"right_refined", f.right},  {"constant_refined", f.constant},
                 {"beta4", constants.beta3(constants.n() / (alpha + zeta), constants.n() / gamma)}};
    return make_report(EstimateId::G_bound, std::move(params), variation(c.constant, f.constant), max_variation,
                       Bound::upper, std::move(details));
}

std::string_view membership_name(MembershipClass c) {
    switch (c) {
        case MembershipClass::critical:
            return "critical";
        case MembershipClass::subcritical:
            return "subcritical";
        case MembershipClass::at_n:
            return "q_equals_n";
    }
    return "";
}

MembershipClass classify_membership(int n, double r, double q) {
    const double nd = n;
    std::ostringstream msg;
    msg << "space-time membership (n = " << n << ", r = " << r << ", q = " << q << "): ";
    if (!(r >= 1.0) || !std::isfinite(r)) {
        msg << "need 1 <= r < inf";
        throw HypothesisViolation(msg.str());
    }
    if (q == nd) {
        return MembershipClass::at_n;
    }
    if (!(q > nd) || !std::isfinite(q)) {
        msg << "need q = n or n < q < inf";
        throw HypothesisViolation(msg.str());
    }
    const double s = 0.5 - nd / (2.0 * q);
    const double inv_r = 1.0 / r;
    if (std::abs(inv_r - s) <= 1e-12) {
        if (n > 2 && !(q < nd * nd / (nd - 2.0))) {
            msg << "scaling-critical pair needs q < n^2/(n-2)";
            throw HypothesisViolation(msg.str());
        }
        return MembershipClass::critical;
    }
    if (inv_r > s) {
        return MembershipClass::subcritical;
    }
    msg << "1/r = " << inv_r << " < 1/2 - n/2q = " << s;
    throw HypothesisViolation(msg.str());
}

double space_time_integral(const std::vector<double>& times, const std::vector<double>& norms, double r, double q,
                           int n) {
    if (times.size() != norms.size() || times.size() < 3 || times.front() != 0.0) {
        throw std::invalid_argument("space_time_integral: need three or more lattice times starting at 0");
    }
    const double a = r * (0.5 - static_cast<double>(n) / (2.0 * q));
    if (!(a < 2.0)) {
        throw HypothesisViolation("space_time_integral: endpoint model needs r (1/2 - n/2q) < 2");
    }
    std::vector<double> f(norms.size());
    for (std::size_t j = 0; j < norms.size(); ++j) {
        f[j] = std::pow(norms[j], r);
    }
    const double t1 = times[1];
    double total = q == n ? 0.5 * (f[0] + f[1]) * t1 : f[1] * t1 / (2.0 - a);

    const std::vector<double> tail_t(times.begin() + 1, times.end());
    const bool positive = std::all_of(f.begin() + 1, f.end(), [](double v) { return v > 0.0; });
    std::vector<Eigen::MatrixXd> samples;
    samples.reserve(tail_t.size());
    for (std::size_t j = 1; j < f.size(); ++j) {
        samples.emplace_back(Eigen::MatrixXd::Constant(1, 1, positive ? std::log(f[j]) : f[j]));
    }
    const MonotoneCubic g(tail_t, std::move(samples));
    const QuadratureRule& ref = gauss_legendre_reference(8);
    for (std::size_t j = 0; j + 1 < tail_t.size(); ++j) {
        const double lo = tail_t[j];
        const double half = 0.5 * (tail_t[j + 1] - lo);
        for (std::size_t i = 0; i < ref.size(); ++i) {
            const double v = g(lo + half * (ref.nodes[i] + 1.0))(0, 0);
            total += half * ref.weights[i] * (positive ? std::exp(v) : v);
        }
    }
    return total;
}

Trajectory refine_first_step(const PicardResult& result, int sweeps) {
    const Trajectory& tr = result.trajectory;
    if (tr.size() < 2) {
        throw std::invalid_argument("refine_first_step: trajectory too short");
    }
    const double t1 = tr.times[1];
    const LatticeDuhamel mini(tr.grid, {0.0, 0.5 * t1, t1});
    const std::vector<OneForm> free = mini.free_evolution(tr.states[0]);
    std::vector<OneForm> v{tr.states[0], tr.at(0.5 * t1), tr.states[1]};
    for (int k = 0; k < sweeps; ++k) {
        const std::vector<OneForm> G = mini.apply_G(v);
        v[1] = free[1] + G[1];
    }
    Trajectory out = tr;
    out.times.insert(out.times.begin() + 1, 0.5 * t1);
    out.states.insert(out.states.begin() + 1, v[1]);
    return out;
}

EstimateReport verify_space_time_membership(const Trajectory& u, const Trajectory& refined, double r, double q,
                                            const DecayConstants& constants, double tolerance) {
    const int n = constants.n();
    const MembershipClass cls = classify_membership(n, r, q);
    const double I = space_time_integral(u.times, u.norms(q), r, q, n);
    const double Ir = space_time_integral(refined.times, refined.norms(q), r, q, n);
    double change = 0.0;
    if (!std::isfinite(I) || !std::isfinite(Ir)) {
        change = kInf;
    } else if (Ir != 0.0 || I != 0.0) {
        change = std::abs(Ir - I) / std::max(std::abs(I), std::abs(Ir));
    }
    json params{{"n", n}, {"r", r}, {"q", q}, {"class", membership_name(cls)}, {"T", u.times.back()}};
    json details{{"integral", I}, {"integral_refined", Ir}, {"t_first", u.times.size() > 1 ? u.times[1] : 0.0}};
    return make_report(EstimateId::LrLq_member, std::move(params), change, tolerance, Bound::upper,
                       std::move(details));
}

LongTimeDecayPlan plan_long_time_decay(const DecayConstants& constants, double p, double q, bool gradient,
                                       double eps) {
    if (!(p > 1.0) || !(p <= q) || !std::isfinite(q)) {
        std::ostringstream msg;
        msg << "long-time decay: need 1 < p <= q < inf, got p = " << p << ", q = " << q;
        throw AdmissibilityError(msg.str());
    }
    if (!(eps > 0.0)) {
        throw AdmissibilityError("long-time decay: eps must be positive");
    }
    LongTimeDecayPlan plan;
    const double n = constants.n();
    const double g = gradient ? 1.0 : 0.0;
    plan.n = constants.n();
    plan.p = p;
    plan.q = q;
    plan.gradient = gradient;
    plan.p_eff = p;
    const double lead = 0.5 * (n / p - n / q) + 0.5 * g;
    if (!(lead < 1.0)) {
        plan.shifted = true;
        const double limit = gradient ? std::min(0.5, n / (2.0 * q)) : std::min(1.0, 0.5 * (1.0 + n / q));
        plan.eps = std::min(eps, 0.5 * limit);
        plan.p_eff = gradient ? n * q / ((1.0 - 2.0 * plan.eps) * q + n) : n * q / (2.0 * (1.0 - plan.eps) * q + n);
    }
    const double X = n / plan.p_eff - n / q;
    plan.time_power = 0.5 * X + g;
    plan.delta = std::min({0.5, 0.5 * (2.0 - X - g), 0.5 * (n - n / plan.p_eff)});
    if (!(plan.delta > 0.0)) {
        std::ostringstream msg;
        msg << "long-time decay: no admissible delta for n = " << n << ", p = " << plan.p_eff << ", q = " << q;
        throw AdmissibilityError(msg.str());
    }
    plan.delta_p = 1.0 - 0.5 * plan.delta;
    plan.delta_s = std::min(0.5, 0.5 * (n - n / plan.p_eff));
    plan.beta_tilde = constants.beta_tilde(plan.p_eff, q, plan.delta, plan.delta_p, plan.delta_s, gradient);
    return plan;
}

EstimateReport verify_tmdcy2(const Trajectory& coarse, const Trajectory& fine, double p, double q, bool gradient,
                             const DecayConstants& constants, double max_variation) {
    const LongTimeDecayPlan plan = plan_long_time_decay(constants, p, q, gradient);
    auto late_sup = [&](const Trajectory& u) {
        const auto v = series(u, q, gradient);
        double s = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) {
            const double t = u.times[j];
            if (t >= 1.0) {
                const double w = std::pow(t, plan.time_power) * std::exp(t * plan.beta_tilde) * v[j];
                s = std::isfinite(w) ? std::max(s, w) : kInf;
            }
        }
        return s;
    };
    const double sc = late_sup(coarse);
    const double sf = late_sup(fine);
    json params{{"n", plan.n},           {"p", p},
                {"q", q},                {"gradient", gradient},
                {"shifted", plan.shifted}, {"p_eff", plan.p_eff},
                {"delta", plan.delta},   {"delta_prime", plan.delta_p},
                {"delta_star", plan.delta_s}};
    json details{{"time_power", plan.time_power}, {"beta_tilde", plan.beta_tilde}, {"sup", sc}, {"sup_refined", sf}};
    return make_report(EstimateId::tmdcy2_rate, std::move(params), variation(sc, sf), max_variation, Bound::upper,
                       std::move(details));
}

}  // namespace hyperns
