#pragma once

#include <array>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace hyperns {

/// A decay constant was requested for parameters outside its admissible range.
/// The message names the violated inequality.
class AdmissibilityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Decay-constant algebra for H^n with heat-kernel decay parameter delta_n and Ricci bound c0.
/// Defaults: c0 = n - 1, delta_n = (n - 1)^2 / 4. Derived minima are memoized per argument tuple.
class DecayConstants {
public:
    explicit DecayConstants(int n = 2);
    DecayConstants(int n, double delta_n, double c0);

    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] double delta_n() const noexcept { return delta_n_; }
    [[nodiscard]] double c0() const noexcept { return c0_; }

    // (delta_n / 2) [(1/p - 1/q) + (8/q)(1 - 1/p)]
    [[nodiscard]] double gamma(double p, double q) const;
    // (gamma(p, q) + c0) / 2
    [[nodiscard]] double beta1(double p, double q) const;
    // (4 delta_n / 2p)(1 - 1/p) + c0 / 2
    [[nodiscard]] double beta2(double p) const;
    // [gamma(q, q) + gamma(p, q)] / 4 + c0 / 2
    [[nodiscard]] double beta3(double p, double q) const;

    /// min{beta1(n, n/delta), beta3(n/(2 delta), n/delta)}; requires 0 < delta < 1.
    [[nodiscard]] double beta_main(double delta) const;
    /// min{beta, beta1(n, n), beta3(n/(delta+1), n)}.
    [[nodiscard]] double beta_prime(double delta) const;
    /// min{beta, beta3(n, q), beta3(n/(n/q+delta), q)}; requires q < n/(1-delta).
    [[nodiscard]] double beta_dprime(double q, double delta) const;
    /// min{beta, beta1(p, p), beta3(n/(n/p+delta), p)}; requires n/p + delta < n.
    [[nodiscard]] double beta_star(double p, double delta) const;
    /// min{beta, beta3(p, p), beta3(n/(n/p+delta), p)}; requires n/p + delta < n.
    [[nodiscard]] double beta_dstar(double p, double delta) const;
    /// The long-time constant for L^p data measured in L^q:
    ///   min{beta(delta'), beta*(p, delta*), beta''_late, beta1(p, q), beta1(n/(n/p+delta), q)}
    /// with beta''_late = min{beta(delta'), beta3(n, q), beta3(n/(delta+delta'), n/delta')}
    /// and beta* built on beta(delta'). Requires n/p - n/q + delta < 2 (n/p - n/q + 1 + delta < 2
    /// when `gradient`), 1 - delta' < delta and n/p + delta* < n.
    [[nodiscard]] double beta_tilde(double p, double q, double delta, double delta_p, double delta_s,
                                    bool gradient = false) const;

private:
    [[nodiscard]] double memo(int id, std::array<double, 5> key, double (DecayConstants::*fn)(std::array<double, 5>) const) const;
    [[nodiscard]] double main_impl(std::array<double, 5> k) const;
    [[nodiscard]] double prime_impl(std::array<double, 5> k) const;
    [[nodiscard]] double dprime_impl(std::array<double, 5> k) const;
    [[nodiscard]] double star_impl(std::array<double, 5> k) const;
    [[nodiscard]] double dstar_impl(std::array<double, 5> k) const;
    [[nodiscard]] double tilde_impl(std::array<double, 5> k) const;

    int n_;
    double delta_n_;
    double c0_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<int, std::array<double, 5>>, double> cache_;
};

/// B(x, y) = int_0^1 tau^{x-1} (1-tau)^{y-1} d tau by double-exponential quadrature.
double beta_function(double x, double y);

/// int_0^t (t-s)^{-a} s^{-b} ds for a, b < 1, by double-exponential quadrature.
double singular_integral(double t, double a, double b);

}  // namespace hyperns
