#pragma once

#include "hyperns/fields.hpp"

namespace hyperns {

// Spectral collocation calculus on a PolarGrid. Radial derivatives use the
// Gauss-Legendre differentiation matrix, angular ones the Fourier transform.
// Both act on different matrix sides, so mixed partials commute exactly.

NodeMatrix d_rho(const PolarGrid& g, const NodeMatrix& values);
NodeMatrix d_theta(const PolarGrid& g, const NodeMatrix& values);

/// Multiplies row i by s(rho_i).
NodeMatrix scale_rows(const NodeMatrix& values, const std::vector<double>& s);

/// Removes angular modes m at rho_i with rho_i^m < kPoleFilterFloor. A smooth field's mode m
/// vanishes like rho^m at the origin, so the discarded content is below the floor, while
/// roundoff there would otherwise be amplified by the 1/sinh factors of the calculus.
inline constexpr double kPoleFilterFloor = 1e-12;
NodeMatrix pole_filter(const PolarGrid& g, const NodeMatrix& values);

/// d phi in orthonormal components (d_rho phi, d_theta phi / sinh rho).
OneForm exterior_derivative(const ScalarField& phi);

/// star d psi in orthonormal components (-d_theta psi / sinh rho, d_rho psi).
OneForm star_d(const GridPtr& grid, const NodeMatrix& psi);

/// Scalar vorticity star d u = (1/sinh)[d_rho(sinh u_theta) - d_theta u_rho].
ScalarField curl(const OneForm& u);

/// Laplace-Beltrami operator, evaluated as -d* d.
ScalarField laplacian(const ScalarField& phi);

}  // namespace hyperns
