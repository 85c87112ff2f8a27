#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace hyperns {

/// Parameters of a geodesic polar grid about a base point of the hyperbolic space.
struct GridSpec {
    int n_dim = 2;
    double rho_max = 8.0;
    std::size_t n_rho = 64;
    std::size_t n_theta = 64;
};

/// Width of the band below rho_max that field data must stay out of.
inline constexpr double kBoundaryMargin = 3.0;

/// A point in geodesic polar coordinates (rho, theta).
struct GridPoint {
    double rho = 0.0;
    double theta = 0.0;
};

/// Geodesic polar discretization of H^2 (H^3 only for radial kernel work).
///
/// Radial nodes are Gauss-Legendre points mapped to (0, rho_max); angular nodes are
/// uniform. A node (i, k) carries the weight w_i sinh^{n-1}(rho_i) * (angular measure / n_theta),
/// so weighted sums integrate against the hyperbolic volume.
///
/// The grid also owns the discrete calculus used by every field operation: the
/// radial collocation derivative, barycentric weights for radial interpolation,
/// and the real angular Fourier transform. All of it is immutable after construction.
class PolarGrid {
public:
    static std::shared_ptr<const PolarGrid> create(const GridSpec& spec);

    [[nodiscard]] int n_dim() const noexcept { return spec_.n_dim; }
    [[nodiscard]] double rho_max() const noexcept { return spec_.rho_max; }
    [[nodiscard]] std::size_t n_rho() const noexcept { return spec_.n_rho; }
    [[nodiscard]] std::size_t n_theta() const noexcept { return spec_.n_theta; }
    [[nodiscard]] std::size_t size() const noexcept { return spec_.n_rho * spec_.n_theta; }
    [[nodiscard]] const GridSpec& spec() const noexcept { return spec_; }

    /// Fields are expected to vanish (to quadrature precision) beyond this radius.
    [[nodiscard]] double safe_radius() const noexcept { return spec_.rho_max - kBoundaryMargin; }

    [[nodiscard]] const std::vector<double>& rho_nodes() const noexcept { return rho_; }
    [[nodiscard]] const std::vector<double>& theta_nodes() const noexcept { return theta_; }
    [[nodiscard]] double rho(std::size_t i) const { return rho_[i]; }
    [[nodiscard]] double theta(std::size_t k) const { return theta_[k]; }
    [[nodiscard]] GridPoint point(std::size_t i, std::size_t k) const { return {rho_[i], theta_[k]}; }

    /// Gauss-Legendre weight of radial node i on (0, rho_max), without the volume density.
    [[nodiscard]] double radial_gl_weight(std::size_t i) const { return gl_weight_[i]; }
    /// Volume weight of node (i, k); independent of k.
    [[nodiscard]] double quad_weight(std::size_t i, std::size_t /*k*/ = 0) const { return ring_weight_[i]; }
    [[nodiscard]] const std::vector<double>& ring_weights() const noexcept { return ring_weight_; }
    [[nodiscard]] double total_weight() const;

    [[nodiscard]] double sinh_rho(std::size_t i) const { return sinh_[i]; }
    [[nodiscard]] double cosh_rho(std::size_t i) const { return cosh_[i]; }
    [[nodiscard]] double coth_rho(std::size_t i) const { return cosh_[i] / sinh_[i]; }

    /// Radial collocation derivative matrix on the Gauss-Legendre nodes.
    [[nodiscard]] const Eigen::MatrixXd& radial_derivative() const noexcept { return d_rho_; }
    [[nodiscard]] const std::vector<double>& barycentric_weights() const noexcept { return bary_; }

    /// Angular transform: coefficients = values * forward(); values = coefficients * inverse().
    /// Coefficient columns are ordered a_0, a_1, b_1, ..., a_{N/2-1}, b_{N/2-1}, a_{N/2}.
    [[nodiscard]] const Eigen::MatrixXd& angular_forward() const noexcept { return fwd_; }
    [[nodiscard]] const Eigen::MatrixXd& angular_inverse() const noexcept { return inv_; }
    /// Spectral theta-derivative: d/dtheta values = values * angular_derivative().
    [[nodiscard]] const Eigen::MatrixXd& angular_derivative() const noexcept { return d_theta_; }
    [[nodiscard]] std::size_t mode_count() const noexcept { return spec_.n_theta / 2 + 1; }
    /// Angular wave number carried by coefficient column c.
    [[nodiscard]] std::size_t mode_of_column(std::size_t c) const noexcept { return (c + 1) / 2; }

    /// Lagrange basis values l_j(x) of the radial nodes at arbitrary x in [0, rho_max].
    void lagrange_row(double x, std::span<double> out) const;

private:
    explicit PolarGrid(const GridSpec& spec);

    GridSpec spec_;
    std::vector<double> rho_, theta_, gl_weight_, ring_weight_, sinh_, cosh_, bary_;
    Eigen::MatrixXd d_rho_, fwd_, inv_, d_theta_;
};

using GridPtr = std::shared_ptr<const PolarGrid>;

/// Hyperbolic law of cosines, evaluated in the cancellation-free half-angle form.
double geodesic_distance(const GridPoint& x, const GridPoint& y);

/// Distance between (r1, theta) and (r2, theta + phi).
double geodesic_distance_polar(double r1, double r2, double phi);

/// sinh^{n_dim-1}(rho).
double volume_density(double rho, int n_dim);

}  // namespace hyperns
