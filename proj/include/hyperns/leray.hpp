#pragma once

#include "hyperns/fields.hpp"
#include "hyperns/mode_operator.hpp"

#include <vector>

namespace hyperns {

/// Green's function of -Delta on H^2: (1/2 pi) ln coth(rho / 2).
double green_function(double rho);

/// Sampled Green's function.
struct GreenTable {
    std::vector<double> rho_samples;
    std::vector<double> values;

    static GreenTable sample(const std::vector<double>& rho);
};

/// d*w = -(1/sinh rho)[d_rho(sinh rho w_rho) + d_theta w_theta].
ScalarField codifferential(const OneForm& w);

/// Per-mode matrices of (-Delta)^{-1}. The angular coefficients of G are known in
/// closed form in the disc radius r = tanh(rho/2):
///   m = 0:  -ln r_>,     m >= 1:  ((r_</r_>)^m - (r_< r_>)^m) / 2m,
/// bounded with a kink on the diagonal, and are integrated cellwise against the radial interpolant.
ModeOperator build_green_operator(const PolarGrid& g);

/// Green operator of a grid, built once and cached.
const ModeOperator& green_operator(const GridPtr& grid);

/// phi = (-Delta)^{-1} f by Green's function convolution.
ScalarField green_inverse_laplacian(const ScalarField& f);

/// Leray projection P w = w - d (-Delta)^{-1} d* w. The result is flagged divergence-free
/// and carries the stream function -(-Delta)^{-1} curl w.
OneForm project(const OneForm& w);

/// Stream function psi with star d psi = P w, i.e. psi = -(-Delta)^{-1} curl w.
NodeMatrix recover_stream_function(const OneForm& w);

/// Potential chi = sum_m r^m (a_m cos m theta + b_m sin m theta), r = tanh(rho/2), of the L^2-orthogonal
/// projection of w onto the harmonic forms star d (r^m cos m theta), star d (r^m sin m theta), 1 <= m < n_theta/2.
/// These are closed, coclosed and square integrable; with the grid quadrature they are mutually orthogonal.
NodeMatrix harmonic_potential(const OneForm& w);

/// Relative size ||d* u||_2 / ||u||_2 (0 for the zero form).
double relative_divergence(const OneForm& u);

}  // namespace hyperns
