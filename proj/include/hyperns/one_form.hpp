#pragma once

#include "hyperns/fields.hpp"

#include <stdexcept>

namespace hyperns {

/// Raised when input data reaches into the boundary band of the grid.
class SupportError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Scalar psi generating the divergence-free form star d psi.
struct StreamFunction {
    GridPtr grid;
    NodeMatrix values;

    static StreamFunction sample(GridPtr grid, const std::function<double(double, double)>& f);
};

/// Throws SupportError if |psi| beyond the safe radius exceeds rel_tol * max |psi|.
void require_safe_support(const PolarGrid& g, const NodeMatrix& values, const char* what, double rel_tol = 1e-8);

/// u = star d psi: u_rho = -(1/sinh rho) d_theta psi, u_theta = d_rho psi. Flagged divergence-free.
OneForm stream_to_oneform(const StreamFunction& psi);

/// Coexact stream function psi_0 = -(-Delta)^{-1} curl u of u, cached on u when available.
NodeMatrix coexact_stream(const OneForm& u);

/// e^{tL} on divergence-free u. Writing u = star d psi_0 + h with psi_0 the coexact stream
/// function and h the L^2-harmonic remainder (closed and coclosed), the flow is
/// e^{-2t} (star d e^{t Delta} psi_0 + h).
OneForm apply_L_semigroup_divfree(const OneForm& u, double t);

/// e^{tL} d phi = e^{-2t} d(e^{2t Delta} phi).
OneForm apply_L_semigroup_exact(const ScalarField& phi, double t);

/// e^{tL} on a general form, by splitting off the exact part d (-Delta)^{-1} d* w.
OneForm apply_L_semigroup(const OneForm& w, double t);

/// Orthonormal-frame components comp[b][a] = (nabla_{e_b} u)(e_a):
///   (1,1) d_rho u_1                      (1,2) d_rho u_2
///   (2,1) d_theta u_1 / sinh - coth u_2   (2,2) d_theta u_2 / sinh + coth u_1
Tensor2Field covariant_gradient(const OneForm& u);

/// (nabla_{u^sharp} u)^flat, components u_1 T_{1a} + u_2 T_{2a}.
OneForm advection(const OneForm& u);

}  // namespace hyperns
