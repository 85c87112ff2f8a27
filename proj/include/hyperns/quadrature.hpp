#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace hyperns {

/// Nodes and weights of a one-dimensional quadrature rule.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [a, b]. Nodes are returned in increasing order.
QuadratureRule gauss_legendre(std::size_t n, double a = -1.0, double b = 1.0);

/// Gauss-Legendre rule on [-1, 1], memoized per n. Thread-safe.
const QuadratureRule& gauss_legendre_reference(std::size_t n);

/// Composite Gauss-Legendre: `panels` equal panels of `n` points each on [a, b].
QuadratureRule composite_gauss_legendre(std::size_t n, std::size_t panels, double a, double b);

/// Double-exponential (tanh-sinh) integration of f over [a, b].
///
/// f receives the abscissa x together with the distances (x - a) and (b - x),
/// computed without cancellation, so integrands with algebraic endpoint
/// singularities can be evaluated accurately right up to the endpoints.
/// Step halving stops once successive estimates agree to `rel_tol`.
struct TanhSinhResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int levels = 0;
};

using EndpointIntegrand = std::function<double(double x, double from_a, double to_b)>;

TanhSinhResult tanh_sinh(const EndpointIntegrand& f, double a, double b, double rel_tol = 1e-13,
                         int max_levels = 12);

}  // namespace hyperns
