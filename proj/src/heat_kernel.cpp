#include "hyperns/heat_kernel.hpp"

#include "hyperns/parallel.hpp"
#include "hyperns/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace hyperns {

namespace {

constexpr double kTailExponent = 38.0;      // exp(-38) < 1e-16
constexpr double kCutoffExponent = 40.0;
constexpr std::size_t kPanelPoints = 16;
constexpr double kInnerTolerance = 1e-9;
constexpr double kCacheBytes = 3.0e8;

void require_positive_time(double t, const char* who) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument(std::string(who) + ": t must be positive");
    }
}

// log sqrt(sinh a) for a > 0 without overflow.
double log_sqrt_sinh(double a) {
    if (a < 20.0) {
        return 0.5 * std::log(std::sinh(a));
    }
    return 0.5 * (a - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * a)));
}

// Integral of 2(rho+w^2) exp(-(2 rho w^2 + w^4)/4t) / sqrt(2 sinh(rho + w^2/2) sinh(w^2/2)/w^2)
// over [0, w_max] on `panels` Gauss-Legendre panels; returned as a log.
double log_inner_integral(double t, double rho, double w_max, std::size_t panels) {
    const QuadratureRule rule = composite_gauss_legendre(kPanelPoints, panels, 0.0, w_max);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
        const double w = rule.nodes[k];
        const double w2 = w * w;
        const double half = 0.5 * w2;
        const double sinhc = (half < 1e-4) ? 0.5 * (1.0 + half * half / 6.0) : std::sinh(half) / w2;
        const double log_den = 0.5 * std::log(2.0 * sinhc) + log_sqrt_sinh(rho + half);
        const double log_num = std::log(2.0 * (rho + w2)) - (2.0 * rho * w2 + w2 * w2) / (4.0 * t);
        sum += rule.weights[k] * std::exp(log_num - log_den);
    }
    return std::log(sum);
}

}  // namespace

double kernel_h3(double t, double rho) {
    require_positive_time(t, "kernel_h3");
    if (rho < 0.0) {
        throw std::invalid_argument("kernel_h3: rho must be non-negative");
    }
    const double ratio = (rho < 1e-8) ? 1.0 - rho * rho / 6.0 : rho / std::sinh(rho);
    return std::pow(4.0 * std::numbers::pi * t, -1.5) * ratio * std::exp(-t - rho * rho / (4.0 * t));
}

double log_kernel_h2(double t, double rho) {
    require_positive_time(t, "kernel_h2");
    if (rho < 0.0) {
        throw std::invalid_argument("kernel_h2: rho must be non-negative");
    }
    const double span = 4.0 * t * kTailExponent;
    const double w_max = std::sqrt(span / (rho + std::sqrt(rho * rho + span)));
    const double log_pref = 0.5 * std::numbers::ln2 - 0.25 * t - 1.5 * std::log(4.0 * std::numbers::pi * t);

    double prev = log_inner_integral(t, rho, w_max, 4);
    for (std::size_t panels = 8; panels <= 32; panels *= 2) {
        const double next = log_inner_integral(t, rho, w_max, panels);
        if (std::abs(std::expm1(next - prev)) <= kInnerTolerance) {
            return log_pref - rho * rho / (4.0 * t) + next;
        }
        prev = next;
    }
    throw KernelQuadratureError("kernel_h2: inner quadrature did not converge at t=" + std::to_string(t) +
                                ", rho=" + std::to_string(rho));
}

double kernel_h2(double t, double rho) { return std::exp(log_kernel_h2(t, rho)); }

double kernel_cutoff(double t) {
    require_positive_time(t, "kernel_cutoff");
    return std::sqrt(4.0 * t * kCutoffExponent);
}

KernelTable::KernelTable(int n_dim, double t, double rho_limit) : n_dim_(n_dim), t_(t) {
    if (n_dim != 2 && n_dim != 3) {
        throw std::invalid_argument("KernelTable: n_dim must be 2 or 3");
    }
    require_positive_time(t, "KernelTable");
    cutoff_ = std::min(kernel_cutoff(t), rho_limit);
    const double sigma = std::sqrt(2.0 * t);
    const auto intervals = std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(cutoff_ / (sigma / 200.0))));
    step_ = cutoff_ / static_cast<double>(intervals);
    rho_.resize(intervals + 1);
    values_.resize(intervals + 1);
    log_values_.resize(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double r = step_ * static_cast<double>(i);
        rho_[i] = r;
        if (n_dim == 3) {
            const double ratio = (r < 1e-8) ? 1.0 : r / std::sinh(r);
            log_values_[i] = -1.5 * std::log(4.0 * std::numbers::pi * t) + std::log(ratio) - t - r * r / (4.0 * t);
        } else {
            log_values_[i] = log_kernel_h2(t, r);
        }
        values_[i] = std::exp(log_values_[i]);
    }
}

double KernelTable::operator()(double rho) const {
    if (rho > cutoff_ || rho < 0.0) {
        return 0.0;
    }
    const double x = rho / step_;
    const std::size_t n = rho_.size();
    auto j0 = static_cast<std::ptrdiff_t>(std::floor(x)) - 1;
    j0 = std::clamp<std::ptrdiff_t>(j0, 0, static_cast<std::ptrdiff_t>(n) - 4);
    const double u = x - static_cast<double>(j0);
    const double l0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
    const double l1 = u * (u - 2.0) * (u - 3.0) / 2.0;
    const double l2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
    const double l3 = u * (u - 1.0) * (u - 2.0) / 6.0;
    const auto j = static_cast<std::size_t>(j0);
    return std::exp(l0 * log_values_[j] + l1 * log_values_[j + 1] + l2 * log_values_[j + 2] + l3 * log_values_[j + 3]);
}

ModeOperator build_heat_operator(const PolarGrid& g, double t) {
    require_positive_time(t, "heat operator");
    if (g.n_dim() != 2) {
        throw std::invalid_argument("heat operator: only n_dim = 2 grids carry fields");
    }
    const KernelTable table(2, t, 2.0 * g.rho_max());
    const double dcut = table.cutoff();
    const double sigma = std::sqrt(2.0 * t);
    const std::size_t modes = g.mode_count();
    const std::size_t nr = g.n_rho();
    const auto nri = static_cast<Eigen::Index>(nr);
    const double m_max = static_cast<double>(modes - 1);
    const double sh_cut = std::sinh(0.5 * dcut);

    std::vector<Eigen::MatrixXd> mats(modes, Eigen::MatrixXd::Zero(nri, nri));
    parallel_for(nr, [&](std::size_t i) {
        const double ri = g.rho(i);
        const RadialFineRule rule = fine_radial_rule(g, ri - dcut, ri + dcut, 0.5 * sigma, 6);
        const auto nf = static_cast<Eigen::Index>(rule.nodes.size());
        Eigen::MatrixXd kmat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(modes), nf);
        std::vector<double> kv, c1, cm, cm_prev;
        const double sinh_i = std::sinh(ri);
        for (Eigen::Index f = 0; f < nf; ++f) {
            const double rp = rule.nodes[static_cast<std::size_t>(f)];
            const double sd = std::sinh(0.5 * (ri - rp));
            const double num = sh_cut * sh_cut - sd * sd;
            if (num <= 0.0) {
                continue;
            }
            const double prod = sinh_i * std::sinh(rp);
            const double x = num / prod;
            const double phi_max = (x >= 1.0) ? std::numbers::pi : 2.0 * std::asin(std::sqrt(x));
            const auto n_ang = static_cast<std::size_t>(32.0 + std::ceil(1.5 * m_max * phi_max / std::numbers::pi));
            const QuadratureRule& ref = gauss_legendre_reference(n_ang);
            kv.assign(n_ang, 0.0);
            c1.resize(n_ang);
            for (std::size_t a = 0; a < n_ang; ++a) {
                const double phi = 0.5 * phi_max * (ref.nodes[a] + 1.0);
                const double sa = std::sin(0.5 * phi);
                const double dist = 2.0 * std::asinh(std::sqrt(sd * sd + prod * sa * sa));
                kv[a] = phi_max * ref.weights[a] * table(dist);  // 2 * (phi_max / 2) * weight
                c1[a] = 1.0 - 2.0 * sa * sa;
            }
            // Chebyshev recurrence cos((m+1)phi) = 2 cos(phi) cos(m phi) - cos((m-1)phi), vectorized over nodes.
            cm_prev.assign(n_ang, 1.0);
            cm = c1;
            double* col = kmat.col(f).data();
            col[0] = std::accumulate(kv.begin(), kv.end(), 0.0);
            for (std::size_t m = 1; m < modes; ++m) {
                double acc = 0.0;
                for (std::size_t a = 0; a < n_ang; ++a) {
                    acc += kv[a] * cm[a];
                    const double next = 2.0 * c1[a] * cm[a] - cm_prev[a];
                    cm_prev[a] = cm[a];
                    cm[a] = next;
                }
                col[m] = acc;
            }
            kmat.col(f) *= rule.weights[static_cast<std::size_t>(f)];
        }
        const Eigen::MatrixXd rows = kmat * rule.lagrange;
        for (std::size_t m = 0; m < modes; ++m) {
            mats[m].row(static_cast<Eigen::Index>(i)) = rows.row(static_cast<Eigen::Index>(m));
        }
    });
    return ModeOperator(std::move(mats));
}

HeatSemigroup::HeatSemigroup(GridPtr grid) : grid_(std::move(grid)) {
    if (grid_->n_dim() != 2) {
        throw std::invalid_argument("HeatSemigroup: only n_dim = 2 grids carry fields");
    }
}

std::shared_ptr<const ModeOperator> HeatSemigroup::op(double t) const {
    require_positive_time(t, "heat semigroup");
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(t); it != cache_.end()) {
        return it->second;
    }
    const double bytes = 8.0 * static_cast<double>(grid_->mode_count() * grid_->n_rho() * grid_->n_rho());
    const auto limit = std::max<std::size_t>(8, static_cast<std::size_t>(kCacheBytes / bytes));
    if (cache_.size() >= limit) {
        // Small steps are the ones the solver reuses; drop the largest time.
        cache_.erase(std::prev(cache_.end()));
    }
    auto built = std::make_shared<const ModeOperator>(build_heat_operator(*grid_, t));
    cache_.emplace(t, built);
    return built;
}

NodeMatrix HeatSemigroup::apply(const NodeMatrix& values, double t) const { return op(t)->apply(*grid_, values); }

ScalarField HeatSemigroup::apply(const ScalarField& f, double t) const {
    return ScalarField(f.grid_ptr(), apply(f.values(), t));
}

std::size_t HeatSemigroup::cached_operators() const {
    std::lock_guard lock(mutex_);
    return cache_.size();
}

const HeatSemigroup& heat_semigroup(const GridPtr& grid) {
    // Entries hold a non-owning alias of the grid and are dropped once the grid expires.
    struct Entry {
        std::weak_ptr<const PolarGrid> owner;
        std::unique_ptr<HeatSemigroup> semigroup;
    };
    static std::mutex mutex;
    static std::map<const PolarGrid*, Entry> registry;
    std::lock_guard lock(mutex);
    for (auto it = registry.begin(); it != registry.end();) {
        it = it->second.owner.expired() ? registry.erase(it) : std::next(it);
    }
    auto& slot = registry[grid.get()];
    if (!slot.semigroup) {
        slot.owner = grid;
        slot.semigroup = std::make_unique<HeatSemigroup>(GridPtr(std::shared_ptr<const void>(), grid.get()));
    }
    return *slot.semigroup;
}

ScalarField apply_scalar_semigroup(const ScalarField& f, double t) {
    require_positive_time(t, "apply_scalar_semigroup");
    return heat_semigroup(f.grid_ptr()).apply(f, t);
}

}  // namespace hyperns
