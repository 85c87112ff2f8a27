#pragma once

#include "hyperns/geometry.hpp"

#include <Eigen/Dense>

#include <vector>

namespace hyperns {

/// A rotation-invariant integral operator on a PolarGrid, stored as one radial
/// matrix per angular wave number: (K f)_m = A_m f_m on the Fourier coefficients.
class ModeOperator {
public:
    ModeOperator() = default;
    explicit ModeOperator(std::vector<Eigen::MatrixXd> per_mode) : mats_(std::move(per_mode)) {}

    [[nodiscard]] Eigen::MatrixXd apply(const PolarGrid& g, const Eigen::MatrixXd& values) const;
    [[nodiscard]] const Eigen::MatrixXd& mode_matrix(std::size_t m) const { return mats_[m]; }
    [[nodiscard]] std::size_t mode_count() const noexcept { return mats_.size(); }
    [[nodiscard]] bool empty() const noexcept { return mats_.empty(); }

private:
    std::vector<Eigen::MatrixXd> mats_;
};

/// Fine radial quadrature for product integration against the grid's radial interpolant.
/// Nodes refine every cell between consecutive grid nodes (and the end cells),
/// restricted to [lo, hi]; weights include the volume density sinh(rho).
struct RadialFineRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    /// lagrange(f, j) = l_j(nodes[f]).
    Eigen::MatrixXd lagrange;
};

RadialFineRule fine_radial_rule(const PolarGrid& g, double lo, double hi, double max_panel,
                                std::size_t points_per_panel);

}  // namespace hyperns
