#include "hyperns/mode_operator.hpp"

#include "hyperns/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hyperns {

Eigen::MatrixXd ModeOperator::apply(const PolarGrid& g, const Eigen::MatrixXd& values) const {
    if (mats_.size() != g.mode_count()) {
        throw std::invalid_argument("ModeOperator: mode count does not match grid");
    }
    const Eigen::MatrixXd coeffs = values * g.angular_forward();
    Eigen::MatrixXd out(coeffs.rows(), coeffs.cols());
    const auto last = coeffs.cols() - 1;
    out.col(0).noalias() = mats_[0] * coeffs.col(0);
    for (Eigen::Index m = 1; 2 * m - 1 < last; ++m) {
        out.middleCols(2 * m - 1, 2).noalias() = mats_[static_cast<std::size_t>(m)] * coeffs.middleCols(2 * m - 1, 2);
    }
    out.col(last).noalias() = mats_.back() * coeffs.col(last);
    return out * g.angular_inverse();
}

RadialFineRule fine_radial_rule(const PolarGrid& g, double lo, double hi, double max_panel,
                                std::size_t points_per_panel) {
    std::vector<double> edges;
    edges.reserve(g.n_rho() + 2);
    edges.push_back(0.0);
    for (double r : g.rho_nodes()) {
        edges.push_back(r);
    }
    edges.push_back(g.rho_max());
    lo = std::max(lo, 0.0);
    hi = std::min(hi, g.rho_max());

    const QuadratureRule& ref = gauss_legendre_reference(points_per_panel);
    RadialFineRule rule;
    for (std::size_t c = 0; c + 1 < edges.size(); ++c) {
        const double a = std::max(edges[c], lo);
        const double b = std::min(edges[c + 1], hi);
        if (!(b > a)) {
            continue;
        }
        const auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_panel));
        const double width = (b - a) / static_cast<double>(std::max<std::size_t>(panels, 1));
        for (std::size_t p = 0; p < std::max<std::size_t>(panels, 1); ++p) {
            const double pa = a + width * static_cast<double>(p);
            for (std::size_t k = 0; k < ref.size(); ++k) {
                const double x = pa + 0.5 * width * (ref.nodes[k] + 1.0);
                rule.nodes.push_back(x);
                rule.weights.push_back(0.5 * width * ref.weights[k] * std::sinh(x));
            }
        }
    }
    const auto nf = static_cast<Eigen::Index>(rule.nodes.size());
    const auto nr = static_cast<Eigen::Index>(g.n_rho());
    rule.lagrange.resize(nf, nr);
    std::vector<double> row(g.n_rho());
    for (Eigen::Index f = 0; f < nf; ++f) {
        g.lagrange_row(rule.nodes[static_cast<std::size_t>(f)], row);
        for (Eigen::Index j = 0; j < nr; ++j) {
            rule.lagrange(f, j) = row[static_cast<std::size_t>(j)];
        }
    }
    return rule;
}

}  // namespace hyperns
