#pragma once

#include "hyperns/geometry.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>

namespace hyperns {

/// Node values on a PolarGrid; rows index rho nodes, columns index theta nodes.
using NodeMatrix = Eigen::MatrixXd;

/// Real values on a PolarGrid.
class ScalarField {
public:
    explicit ScalarField(GridPtr grid);
    ScalarField(GridPtr grid, NodeMatrix values);

    /// Samples f(rho, theta) at every node.
    static ScalarField sample(GridPtr grid, const std::function<double(double, double)>& f);

    [[nodiscard]] const PolarGrid& grid() const noexcept { return *grid_; }
    [[nodiscard]] const GridPtr& grid_ptr() const noexcept { return grid_; }
    [[nodiscard]] const NodeMatrix& values() const noexcept { return values_; }
    [[nodiscard]] NodeMatrix& values() noexcept { return values_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t k) const {
        return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
    }

    [[nodiscard]] bool all_finite() const noexcept { return values_.allFinite(); }

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double c);

private:
    GridPtr grid_;
    NodeMatrix values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double c, ScalarField a);

/// A 1-form stored by its components in the orthonormal coframe {d rho, sinh(rho) d theta}.
///
/// Forms known to be coclosed carry the divergence_free flag; forms produced from a
/// stream function additionally cache it, so the semigroup never has to re-invert.
class OneForm {
public:
    explicit OneForm(GridPtr grid);
    OneForm(GridPtr grid, NodeMatrix comp_rho, NodeMatrix comp_theta);

    [[nodiscard]] const PolarGrid& grid() const noexcept { return *grid_; }
    [[nodiscard]] const GridPtr& grid_ptr() const noexcept { return grid_; }
    [[nodiscard]] const NodeMatrix& comp_rho() const noexcept { return rho_; }
    [[nodiscard]] const NodeMatrix& comp_theta() const noexcept { return theta_; }
    /// Mutable access drops the divergence-free flag and any cached stream function.
    [[nodiscard]] NodeMatrix& mutable_comp_rho();
    [[nodiscard]] NodeMatrix& mutable_comp_theta();

    [[nodiscard]] bool divergence_free() const noexcept { return divergence_free_; }
    [[nodiscard]] const std::optional<NodeMatrix>& stream_function() const noexcept { return stream_; }
    void mark_divergence_free(std::optional<NodeMatrix> stream = std::nullopt);

    /// Pointwise frame norm sqrt(u_rho^2 + u_theta^2).
    [[nodiscard]] ScalarField pointwise_norm() const;

    OneForm& operator+=(const OneForm& other);
    OneForm& operator-=(const OneForm& other);
    OneForm& operator*=(double c);

private:
    GridPtr grid_;
    NodeMatrix rho_, theta_;
    bool divergence_free_ = false;
    std::optional<NodeMatrix> stream_;
};

OneForm operator+(OneForm a, const OneForm& b);
OneForm operator-(OneForm a, const OneForm& b);
OneForm operator*(double c, OneForm a);

/// Tangent vector field, components in the orthonormal frame {d/d rho, (1/sinh rho) d/d theta}.
struct VectorField {
    GridPtr grid;
    NodeMatrix comp_rho;
    NodeMatrix comp_theta;
};

/// Rank-2 covariant tensor field, comp[b][a] = (nabla_{e_b} u)_a in the orthonormal frame.
struct Tensor2Field {
    GridPtr grid;
    NodeMatrix comp[2][2];

    /// Pointwise Frobenius norm.
    [[nodiscard]] ScalarField pointwise_norm() const;
};

/// (sum over nodes of |f|^p * weight)^{1/p}; throws for p < 1.
double lp_norm(const ScalarField& f, double p);
/// L^p norm of the pointwise frame norm.
double lp_norm(const OneForm& u, double p);
/// L^p norm of the pointwise Frobenius norm.
double lp_norm(const Tensor2Field& t, double p);
double sup_norm(const ScalarField& f);
double sup_norm(const OneForm& u);

/// Musical isomorphisms. With orthonormal components both are the identity on components.
VectorField sharp(const OneForm& u);
OneForm flat(const VectorField& v);
OneForm sharp_flat(const OneForm& u);

}  // namespace hyperns
