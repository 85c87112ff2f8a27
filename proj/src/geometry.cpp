#include "hyperns/geometry.hpp"

#include "hyperns/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hyperns {

std::shared_ptr<const PolarGrid> PolarGrid::create(const GridSpec& spec) {
    if (spec.n_dim != 2 && spec.n_dim != 3) {
        throw std::invalid_argument("PolarGrid: n_dim must be 2 or 3, got " + std::to_string(spec.n_dim));
    }
    if (!(spec.rho_max > 0.0) || !std::isfinite(spec.rho_max)) {
        throw std::invalid_argument("PolarGrid: rho_max must be positive");
    }
    if (spec.n_rho < 8) {
        throw std::invalid_argument("PolarGrid: n_rho must be at least 8");
    }
    if (spec.n_theta < 8 || spec.n_theta % 2 != 0) {
        throw std::invalid_argument("PolarGrid: n_theta must be even and at least 8");
    }
    return std::shared_ptr<const PolarGrid>(new PolarGrid(spec));
}

PolarGrid::PolarGrid(const GridSpec& spec) : spec_(spec) {
    const std::size_t nr = spec.n_rho;
    const std::size_t nt = spec.n_theta;

    const QuadratureRule& ref = gauss_legendre_reference(nr);
    const double half = 0.5 * spec.rho_max;
    const double angular_measure = (spec.n_dim == 2) ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;

    rho_.resize(nr);
    gl_weight_.resize(nr);
    ring_weight_.resize(nr);
    sinh_.resize(nr);
    cosh_.resize(nr);
    bary_.resize(nr);
    for (std::size_t i = 0; i < nr; ++i) {
        const double x = ref.nodes[i];
        rho_[i] = half * (x + 1.0);
        gl_weight_[i] = half * ref.weights[i];
        sinh_[i] = std::sinh(rho_[i]);
        cosh_[i] = std::cosh(rho_[i]);
        ring_weight_[i] = gl_weight_[i] * volume_density(rho_[i], spec.n_dim) * angular_measure /
                          static_cast<double>(nt);
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        bary_[i] = sign * std::sqrt((1.0 - x * x) * ref.weights[i]);
    }

    d_rho_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nr));
    for (std::size_t i = 0; i < nr; ++i) {
        double diag = 0.0;
        for (std::size_t j = 0; j < nr; ++j) {
            if (i == j) {
                continue;
            }
            const double v = (bary_[j] / bary_[i]) / (rho_[i] - rho_[j]);
            d_rho_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            diag -= v;
        }
        d_rho_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag;
    }

    theta_.resize(nt);
    const auto n = static_cast<Eigen::Index>(nt);
    fwd_ = Eigen::MatrixXd::Zero(n, n);
    inv_ = Eigen::MatrixXd::Zero(n, n);
    const double ntd = static_cast<double>(nt);
    for (std::size_t k = 0; k < nt; ++k) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / ntd;
        theta_[k] = th;
        const auto kk = static_cast<Eigen::Index>(k);
        fwd_(kk, 0) = 1.0 / ntd;
        inv_(0, kk) = 1.0;
        for (std::size_t m = 1; m < nt / 2; ++m) {
            const double c = std::cos(static_cast<double>(m) * th);
            const double s = std::sin(static_cast<double>(m) * th);
            const auto ca = static_cast<Eigen::Index>(2 * m - 1);
            fwd_(kk, ca) = 2.0 * c / ntd;
            fwd_(kk, ca + 1) = 2.0 * s / ntd;
            inv_(ca, kk) = c;
            inv_(ca + 1, kk) = s;
        }
        const double alt = (k % 2 == 0) ? 1.0 : -1.0;
        fwd_(kk, n - 1) = alt / ntd;
        inv_(n - 1, kk) = alt;
    }

    Eigen::MatrixXd spin = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t m = 1; m < nt / 2; ++m) {
        const auto ca = static_cast<Eigen::Index>(2 * m - 1);
        spin(ca + 1, ca) = static_cast<double>(m);
        spin(ca, ca + 1) = -static_cast<double>(m);
    }
    d_theta_ = fwd_ * spin * inv_;
}

double PolarGrid::total_weight() const {
    return std::accumulate(ring_weight_.begin(), ring_weight_.end(), 0.0) *
           static_cast<double>(spec_.n_theta);
}

void PolarGrid::lagrange_row(double x, std::span<double> out) const {
    const std::size_t nr = rho_.size();
    double denom = 0.0;
    for (std::size_t j = 0; j < nr; ++j) {
        const double diff = x - rho_[j];
        if (diff == 0.0) {
            std::fill(out.begin(), out.end(), 0.0);
            out[j] = 1.0;
            return;
        }
        out[j] = bary_[j] / diff;
        denom += out[j];
    }
    for (std::size_t j = 0; j < nr; ++j) {
        out[j] /= denom;
    }
}

double geodesic_distance_polar(double r1, double r2, double phi) {
    const double sh = std::sinh(0.5 * (r1 - r2));
    const double sa = std::sin(0.5 * phi);
    const double arg = sh * sh + std::sinh(r1) * std::sinh(r2) * sa * sa;
    return 2.0 * std::asinh(std::sqrt(arg));
}

double geodesic_distance(const GridPoint& x, const GridPoint& y) {
    return geodesic_distance_polar(x.rho, y.rho, x.theta - y.theta);
}

double volume_density(double rho, int n_dim) {
    return std::pow(std::sinh(rho), n_dim - 1);
}

}  // namespace hyperns
