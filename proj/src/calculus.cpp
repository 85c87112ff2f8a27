#include "hyperns/calculus.hpp"

#include "hyperns/leray.hpp"

namespace hyperns {

namespace {

std::vector<double> sinh_column(const PolarGrid& g) {
    std::vector<double> s(g.n_rho());
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = g.sinh_rho(i);
    }
    return s;
}

std::vector<double> inv_sinh_column(const PolarGrid& g) {
    std::vector<double> s(g.n_rho());
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = 1.0 / g.sinh_rho(i);
    }
    return s;
}

}  // namespace

NodeMatrix d_rho(const PolarGrid& g, const NodeMatrix& values) { return g.radial_derivative() * values; }

NodeMatrix d_theta(const PolarGrid& g, const NodeMatrix& values) { return values * g.angular_derivative(); }

NodeMatrix scale_rows(const NodeMatrix& values, const std::vector<double>& s) {
    NodeMatrix out = values;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        out.row(i) *= s[static_cast<std::size_t>(i)];
    }
    return out;
}

OneForm exterior_derivative(const ScalarField& phi) {
    const PolarGrid& g = phi.grid();
    return OneForm(phi.grid_ptr(), d_rho(g, phi.values()),
                   scale_rows(d_theta(g, phi.values()), inv_sinh_column(g)));
}

NodeMatrix pole_filter(const PolarGrid& g, const NodeMatrix& values) {
    NodeMatrix c = values * g.angular_forward();
    const double log_floor = std::log(kPoleFilterFloor);
    for (std::size_t i = 0; i < g.n_rho() && g.rho(i) < 1.0; ++i) {
        const double m_cut = log_floor / std::log(g.rho(i));
        for (Eigen::Index col = 1; col < c.cols(); ++col) {
            if (static_cast<double>(g.mode_of_column(static_cast<std::size_t>(col))) > m_cut) {
                c(static_cast<Eigen::Index>(i), col) = 0.0;
            }
        }
    }
    return c * g.angular_inverse();
}

OneForm star_d(const GridPtr& grid, const NodeMatrix& psi) {
    const PolarGrid& g = *grid;
    OneForm out(grid, -scale_rows(d_theta(g, psi), inv_sinh_column(g)), d_rho(g, psi));
    out.mark_divergence_free(psi);
    return out;
}

ScalarField curl(const OneForm& u) {
    const PolarGrid& g = u.grid();
    NodeMatrix v = d_rho(g, scale_rows(u.comp_theta(), sinh_column(g))) - d_theta(g, u.comp_rho());
    return ScalarField(u.grid_ptr(), scale_rows(v, inv_sinh_column(g)));
}

ScalarField laplacian(const ScalarField& phi) {
    ScalarField out = codifferential(exterior_derivative(phi));
    out *= -1.0;
    return out;
}

}  // namespace hyperns
