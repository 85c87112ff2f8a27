#include "hyperns/leray.hpp"

#include "hyperns/calculus.hpp"
#include "hyperns/parallel.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace hyperns {

namespace {

// ln tanh(rho/2), accurate when tanh is close to 1.
double log_disc_radius(double rho) {
    if (rho < 1.0) {
        return std::log(std::tanh(0.5 * rho));
    }
    return std::log1p(-2.0 / (std::exp(rho) + 1.0));
}

}  // namespace

double green_function(double rho) {
    if (!(rho > 0.0)) {
        throw std::invalid_argument("green_function: rho must be positive");
    }
    return -log_disc_radius(rho) / (2.0 * std::numbers::pi);
}

GreenTable GreenTable::sample(const std::vector<double>& rho) {
    GreenTable out;
    out.rho_samples = rho;
    out.values.reserve(rho.size());
    for (double r : rho) {
        out.values.push_back(green_function(r));
    }
    return out;
}

ScalarField codifferential(const OneForm& w) {
    const PolarGrid& g = w.grid();
    std::vector<double> sh(g.n_rho()), inv(g.n_rho());
    for (std::size_t i = 0; i < g.n_rho(); ++i) {
        sh[i] = g.sinh_rho(i);
        inv[i] = -1.0 / sh[i];
    }
    const NodeMatrix radial = d_rho(g, scale_rows(w.comp_rho(), sh));
    const NodeMatrix angular = d_theta(g, w.comp_theta());
    return ScalarField(w.grid_ptr(), scale_rows(radial + angular, inv));
}

ModeOperator build_green_operator(const PolarGrid& g) {
    if (g.n_dim() != 2) {
        throw std::invalid_argument("green operator: only n_dim = 2 grids carry fields");
    }
    const std::size_t modes = g.mode_count();
    const std::size_t nr = g.n_rho();
    const auto nri = static_cast<Eigen::Index>(nr);
    const RadialFineRule rule = fine_radial_rule(g, 0.0, g.rho_max(), 0.05, 6);
    const auto nf = static_cast<Eigen::Index>(rule.nodes.size());
    std::vector<double> log_r(rule.nodes.size());
    for (std::size_t f = 0; f < log_r.size(); ++f) {
        log_r[f] = log_disc_radius(rule.nodes[f]);
    }

    std::vector<Eigen::MatrixXd> mats(modes, Eigen::MatrixXd::Zero(nri, nri));
    parallel_for(nr, [&](std::size_t i) {
        const double li = log_disc_radius(g.rho(i));
        Eigen::MatrixXd kmat(static_cast<Eigen::Index>(modes), nf);
        for (Eigen::Index f = 0; f < nf; ++f) {
            const double lf = log_r[static_cast<std::size_t>(f)];
            const double l_small = std::min(li, lf);
            const double l_big = std::max(li, lf);
            const double w = rule.weights[static_cast<std::size_t>(f)];
            kmat(0, f) = -l_big * w;
            for (std::size_t m = 1; m < modes; ++m) {
                const double md = static_cast<double>(m);
                // (r_</r_>)^m - (r_< r_>)^m = (r_</r_>)^m (1 - r_>^{2m})
                const double v = std::exp(md * (l_small - l_big)) * -std::expm1(2.0 * md * l_big);
                kmat(static_cast<Eigen::Index>(m), f) = w * v / (2.0 * md);
            }
        }
        const Eigen::MatrixXd rows = kmat * rule.lagrange;
        for (std::size_t m = 0; m < modes; ++m) {
            mats[m].row(static_cast<Eigen::Index>(i)) = rows.row(static_cast<Eigen::Index>(m));
        }
    });
    return ModeOperator(std::move(mats));
}

const ModeOperator& green_operator(const GridPtr& grid) {
    struct Entry {
        std::weak_ptr<const PolarGrid> owner;
        std::unique_ptr<ModeOperator> op;
    };
    static std::mutex mutex;
    static std::map<const PolarGrid*, Entry> registry;
    std::lock_guard lock(mutex);
    for (auto it = registry.begin(); it != registry.end();) {
        it = it->second.owner.expired() ? registry.erase(it) : std::next(it);
    }
    auto& slot = registry[grid.get()];
    if (!slot.op) {
        slot.owner = grid;
        slot.op = std::make_unique<ModeOperator>(build_green_operator(*grid));
    }
    return *slot.op;
}

ScalarField green_inverse_laplacian(const ScalarField& f) {
    return ScalarField(f.grid_ptr(), green_operator(f.grid_ptr()).apply(f.grid(), f.values()));
}

NodeMatrix recover_stream_function(const OneForm& w) {
    return -green_inverse_laplacian(curl(w)).values();
}

OneForm project(const OneForm& w) {
    const ScalarField alpha = green_inverse_laplacian(codifferential(w));
    OneForm out = w - exterior_derivative(alpha);
    out.mark_divergence_free(recover_stream_function(w));
    return out;
}

NodeMatrix harmonic_potential(const OneForm& w) {
    const PolarGrid& g = w.grid();
    const auto nr = static_cast<Eigen::Index>(g.n_rho());
    const NodeMatrix Cr = w.comp_rho() * g.angular_forward();
    const NodeMatrix Ct = w.comp_theta() * g.angular_forward();
    const double half_n = 0.5 * static_cast<double>(g.n_theta());
    NodeMatrix coeff = NodeMatrix::Zero(nr, Cr.cols());
    for (std::size_t m = 1; m + 1 < g.mode_count(); ++m) {
        const auto ca = static_cast<Eigen::Index>(2 * m - 1);
        const double md = static_cast<double>(m);
        double sc = 0.0;
        double ss = 0.0;
        double norm = 0.0;
        std::vector<double> rm(g.n_rho());
        for (Eigen::Index i = 0; i < nr; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            const double r = std::tanh(0.5 * g.rho(iu));
            rm[iu] = std::pow(r, md);
            // star d (r^m cos m theta) = (m r^m / sinh) sin m theta d rho + m r^{m-1} r' cos m theta (sinh d theta)
            const double a_rho = md * rm[iu] / g.sinh_rho(iu);
            const double a_theta = md * std::pow(r, md - 1.0) * 0.5 * (1.0 - r * r);
            const double wt = g.quad_weight(iu) * half_n;
            sc += wt * (a_rho * Cr(i, ca + 1) + a_theta * Ct(i, ca));
            ss += wt * (-a_rho * Cr(i, ca) + a_theta * Ct(i, ca + 1));
            norm += wt * (a_rho * a_rho + a_theta * a_theta);
        }
        if (norm <= 0.0) {
            continue;
        }
        for (Eigen::Index i = 0; i < nr; ++i) {
            coeff(i, ca) = rm[static_cast<std::size_t>(i)] * sc / norm;
            coeff(i, ca + 1) = rm[static_cast<std::size_t>(i)] * ss / norm;
        }
    }
    return coeff * g.angular_inverse();
}

double relative_divergence(const OneForm& u) {
    const double base = lp_norm(u, 2.0);
    if (base == 0.0) {
        return 0.0;
    }
    return lp_norm(codifferential(u), 2.0) / base;
}

}  // namespace hyperns
