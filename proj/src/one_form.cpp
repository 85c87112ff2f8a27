#include "hyperns/one_form.hpp"

#include "hyperns/calculus.hpp"
#include "hyperns/heat_kernel.hpp"
#include "hyperns/leray.hpp"

#include <cmath>
#include <string>

namespace hyperns {

namespace {

void require_positive_time(double t, const char* who) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument(std::string(who) + ": t must be positive");
    }
}

}  // namespace

StreamFunction StreamFunction::sample(GridPtr grid, const std::function<double(double, double)>& f) {
    ScalarField s = ScalarField::sample(grid, f);
    return {std::move(grid), s.values()};
}

void require_safe_support(const PolarGrid& g, const NodeMatrix& values, const char* what, double rel_tol) {
    const double peak = values.cwiseAbs().maxCoeff();
    double outside = 0.0;
    for (std::size_t i = 0; i < g.n_rho(); ++i) {
        if (g.rho(i) > g.safe_radius()) {
            outside = std::max(outside, values.row(static_cast<Eigen::Index>(i)).cwiseAbs().maxCoeff());
        }
    }
    if (outside > rel_tol * peak) {
        throw SupportError(std::string(what) + ": data not supported inside the safe radius " +
                           std::to_string(g.safe_radius()));
    }
}

OneForm stream_to_oneform(const StreamFunction& psi) {
    require_safe_support(*psi.grid, psi.values, "stream_to_oneform");
    return star_d(psi.grid, psi.values);
}

NodeMatrix coexact_stream(const OneForm& u) {
    if (u.stream_function()) {
        return *u.stream_function();
    }
    return recover_stream_function(u);
}

OneForm apply_L_semigroup_divfree(const OneForm& u, double t) {
    require_positive_time(t, "apply_L_semigroup_divfree");
    if (!u.divergence_free()) {
        throw std::invalid_argument("apply_L_semigroup_divfree: input is not flagged divergence-free");
    }
    const NodeMatrix psi = coexact_stream(u);
    const OneForm coexact = star_d(u.grid_ptr(), psi);
    const NodeMatrix evolved = heat_semigroup(u.grid_ptr()).apply(psi, t);
    const double decay = std::exp(-2.0 * t);
    OneForm out(u.grid_ptr(),
                decay * (star_d(u.grid_ptr(), evolved).comp_rho() + u.comp_rho() - coexact.comp_rho()),
                decay * (star_d(u.grid_ptr(), evolved).comp_theta() + u.comp_theta() - coexact.comp_theta()));
    out.mark_divergence_free(decay * evolved);
    return out;
}

OneForm apply_L_semigroup_exact(const ScalarField& phi, double t) {
    require_positive_time(t, "apply_L_semigroup_exact");
    ScalarField evolved = heat_semigroup(phi.grid_ptr()).apply(phi, 2.0 * t);
    evolved *= std::exp(-2.0 * t);
    return exterior_derivative(evolved);
}

OneForm apply_L_semigroup(const OneForm& w, double t) {
    const ScalarField alpha = green_inverse_laplacian(codifferential(w));
    OneForm rest = w - exterior_derivative(alpha);
    rest.mark_divergence_free(recover_stream_function(w));
    OneForm out = apply_L_semigroup_exact(alpha, t);
    out += apply_L_semigroup_divfree(rest, t);
    return out;
}

Tensor2Field covariant_gradient(const OneForm& u) {
    const PolarGrid& g = u.grid();
    std::vector<double> inv_sinh(g.n_rho()), coth(g.n_rho());
    for (std::size_t i = 0; i < g.n_rho(); ++i) {
        inv_sinh[i] = 1.0 / g.sinh_rho(i);
        coth[i] = g.coth_rho(i);
    }
    Tensor2Field t{u.grid_ptr(), {}};
    t.comp[0][0] = d_rho(g, u.comp_rho());
    t.comp[0][1] = d_rho(g, u.comp_theta());
    t.comp[1][0] = scale_rows(d_theta(g, u.comp_rho()), inv_sinh) - scale_rows(u.comp_theta(), coth);
    t.comp[1][1] = scale_rows(d_theta(g, u.comp_theta()), inv_sinh) + scale_rows(u.comp_rho(), coth);
    return t;
}

OneForm advection(const OneForm& u) {
    const Tensor2Field t = covariant_gradient(u);
    const auto u1 = u.comp_rho().array();
    const auto u2 = u.comp_theta().array();
    NodeMatrix a1 = (u1 * t.comp[0][0].array() + u2 * t.comp[1][0].array()).matrix();
    NodeMatrix a2 = (u1 * t.comp[0][1].array() + u2 * t.comp[1][1].array()).matrix();
    return OneForm(u.grid_ptr(), std::move(a1), std::move(a2));
}

}  // namespace hyperns
