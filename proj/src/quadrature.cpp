#include "hyperns/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace hyperns {

namespace {

// Legendre P_n and its derivative at x by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(std::size_t n, double x) {
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 -
                           (static_cast<double>(k) - 1.0) * p0) /
                          static_cast<double>(k);
        p0 = p1;
        p1 = pk;
    }
    const double nd = static_cast<double>(n);
    const double dp = nd * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
    const QuadratureRule& ref = gauss_legendre_reference(n);
    QuadratureRule out;
    out.nodes.resize(n);
    out.weights.resize(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    for (std::size_t i = 0; i < n; ++i) {
        out.nodes[i] = mid + half * ref.nodes[i];
        out.weights[i] = half * ref.weights[i];
    }
    return out;
}

const QuadratureRule& gauss_legendre_reference(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("gauss_legendre: n must be positive");
    }
    static std::mutex mutex;
    static std::map<std::size_t, QuadratureRule> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) {
        return it->second;
    }

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
    } else {
        const double nd = static_cast<double>(n);
        for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
            // Tricomi initial guess, then Newton.
            const double k = static_cast<double>(i) + 1.0;
            double x = std::cos(std::numbers::pi * (k - 0.25) / (nd + 0.5));
            for (int iter = 0; iter < 100; ++iter) {
                const auto [p, dp] = legendre_with_derivative(n, x);
                const double dx = p / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) {
                    break;
                }
            }
            const auto [p, dp] = legendre_with_derivative(n, x);
            (void)p;
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            rule.nodes[n - 1 - i] = x;
            rule.nodes[i] = -x;
            rule.weights[n - 1 - i] = w;
            rule.weights[i] = w;
        }
        if (n % 2 == 1) {
            rule.nodes[n / 2] = 0.0;
        }
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

QuadratureRule composite_gauss_legendre(std::size_t n, std::size_t panels, double a, double b) {
    QuadratureRule out;
    out.nodes.reserve(n * panels);
    out.weights.reserve(n * panels);
    const QuadratureRule& ref = gauss_legendre_reference(n);
    const double width = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + width * static_cast<double>(p);
        const double half = 0.5 * width;
        for (std::size_t i = 0; i < n; ++i) {
            out.nodes.push_back(lo + half * (ref.nodes[i] + 1.0));
            out.weights.push_back(half * ref.weights[i]);
        }
    }
    return out;
}

TanhSinhResult tanh_sinh(const EndpointIntegrand& f, double a, double b, double rel_tol,
                         int max_levels) {
    constexpr double kHalfPi = 0.5 * std::numbers::pi;
    constexpr double kSMax = 6.5;
    const double len = b - a;

    auto term = [&](double s) -> double {
        const double u = kHalfPi * std::sinh(s);
        const double eu = std::exp(u);
        const double emu = std::exp(-u);
        const double from_a = len / (1.0 + emu * emu);
        const double to_b = len / (1.0 + eu * eu);
        if (from_a <= 0.0 || to_b <= 0.0) {
            return 0.0;
        }
        const double sech = 2.0 / (eu + emu);
        const double w = 0.5 * len * kHalfPi * std::cosh(s) * sech * sech;
        if (w == 0.0) {
            return 0.0;
        }
        const double x = (s < 0.0) ? a + from_a : b - to_b;
        return w * f(x, from_a, to_b);
    };

    TanhSinhResult result;
    double h = 1.0;
    double sum = term(0.0);
    for (double s = h; s <= kSMax; s += h) {
        sum += term(s) + term(-s);
    }
    double estimate = h * sum;
    for (int level = 1; level <= max_levels; ++level) {
        h *= 0.5;
        double added = 0.0;
        for (double s = h; s <= kSMax; s += 2.0 * h) {
            added += term(s) + term(-s);
        }
        sum += added;
        const double next = h * sum;
        result.error_estimate = std::abs(next - estimate);
        result.levels = level;
        estimate = next;
        if (level >= 3 && result.error_estimate <= rel_tol * std::abs(next)) {
            break;
        }
    }
    result.value = estimate;
    return result;
}

}  // namespace hyperns
