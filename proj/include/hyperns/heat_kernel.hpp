#pragma once

#include "hyperns/fields.hpp"
#include "hyperns/mode_operator.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace hyperns {

/// Raised when the inner kernel quadrature does not settle under node doubling.
class KernelQuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Heat kernel of H^3: (4 pi t)^{-3/2} (rho / sinh rho) exp(-t - rho^2 / 4t).
double kernel_h3(double t, double rho);

/// Heat kernel of H^2 from its one-dimensional integral representation.
double kernel_h2(double t, double rho);

/// Natural log of kernel_h2, finite far into the Gaussian tail.
double log_kernel_h2(double t, double rho);

/// No kernel value beyond this distance matters at double precision.
double kernel_cutoff(double t);

/// h_t sampled on a uniform rho lattice over [0, cutoff], interpolated by
/// local cubics in log h (so interpolated values stay positive). Zero beyond.
class KernelTable {
public:
    KernelTable(int n_dim, double t, double rho_limit);

    [[nodiscard]] double operator()(double rho) const;
    [[nodiscard]] int n_dim() const noexcept { return n_dim_; }
    [[nodiscard]] double t() const noexcept { return t_; }
    [[nodiscard]] double cutoff() const noexcept { return cutoff_; }
    [[nodiscard]] const std::vector<double>& rho_samples() const noexcept { return rho_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] static constexpr int interpolation_order() noexcept { return 3; }

private:
    int n_dim_;
    double t_;
    double cutoff_;
    double step_;
    std::vector<double> rho_, values_, log_values_;
};

/// Grid-level heat semigroup e^{t Delta} on H^2, one ModeOperator per requested t.
///
/// Each operator integrates the kernel exactly against the grid interpolant of
/// the input (radial Lagrange basis times angular Fourier modes), so constants
/// are preserved up to boundary leakage and short times stay accurate.
class HeatSemigroup {
public:
    explicit HeatSemigroup(GridPtr grid);

    [[nodiscard]] std::shared_ptr<const ModeOperator> op(double t) const;
    [[nodiscard]] NodeMatrix apply(const NodeMatrix& values, double t) const;
    [[nodiscard]] ScalarField apply(const ScalarField& f, double t) const;
    [[nodiscard]] const GridPtr& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t cached_operators() const;

private:
    GridPtr grid_;
    mutable std::mutex mutex_;
    mutable std::map<double, std::shared_ptr<const ModeOperator>> cache_;
};

/// Builds the per-mode matrices of e^{t Delta} on an n_dim = 2 grid.
ModeOperator build_heat_operator(const PolarGrid& g, double t);

/// Shared semigroup instance for a grid (created on first use).
const HeatSemigroup& heat_semigroup(const GridPtr& grid);

/// e^{t Delta} f; t <= 0 is rejected.
ScalarField apply_scalar_semigroup(const ScalarField& f, double t);

}  // namespace hyperns
