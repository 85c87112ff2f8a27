#include "hyperns/constants.hpp"

#include "hyperns/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace hyperns {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void require_delta(double delta, const char* name) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw AdmissibilityError(std::string(name) + " must lie in (0, 1), got " + fmt(delta));
    }
}

}  // namespace

DecayConstants::DecayConstants(int n)
    : DecayConstants(n, 0.25 * (n - 1.0) * (n - 1.0), static_cast<double>(n - 1)) {}

DecayConstants::DecayConstants(int n, double delta_n, double c0) : n_(n), delta_n_(delta_n), c0_(c0) {
    if (n < 2) {
        throw std::invalid_argument("DecayConstants: n must be at least 2");
    }
    if (!(delta_n > 0.0) || !(c0 > 0.0)) {
        throw std::invalid_argument("DecayConstants: delta_n and c0 must be positive");
    }
}

double DecayConstants::gamma(double p, double q) const {
    return 0.5 * delta_n_ * ((1.0 / p - 1.0 / q) + (8.0 / q) * (1.0 - 1.0 / p));
}

double DecayConstants::beta1(double p, double q) const { return 0.5 * (gamma(p, q) + c0_); }

double DecayConstants::beta2(double p) const {
    return (4.0 * delta_n_ / (2.0 * p)) * (1.0 - 1.0 / p) + 0.5 * c0_;
}

double DecayConstants::beta3(double p, double q) const {
    return 0.25 * (gamma(q, q) + gamma(p, q)) + 0.5 * c0_;
}

double DecayConstants::memo(int id, std::array<double, 5> key,
                            double (DecayConstants::*fn)(std::array<double, 5>) const) const {
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find({id, key}); it != cache_.end()) {
            return it->second;
        }
    }
    const double v = (this->*fn)(key);
    std::lock_guard lock(mutex_);
    cache_.emplace(std::make_pair(id, key), v);
    return v;
}

double DecayConstants::main_impl(std::array<double, 5> k) const {
    const double delta = k[0];
    require_delta(delta, "delta");
    const double n = n_;
    return std::min(beta1(n, n / delta), beta3(n / (2.0 * delta), n / delta));
}

double DecayConstants::prime_impl(std::array<double, 5> k) const {
    const double delta = k[0];
    const double n = n_;
    return std::min({beta_main(delta), beta1(n, n), beta3(n / (delta + 1.0), n)});
}

double DecayConstants::dprime_impl(std::array<double, 5> k) const {
    const double q = k[0];
    const double delta = k[1];
    require_delta(delta, "delta");
    const double n = n_;
    if (!(q < n / (1.0 - delta))) {
        throw AdmissibilityError("beta'' inadmissible: q >= n/(1-delta) (q=" + fmt(q) + ", n/(1-delta)=" +
                                 fmt(n / (1.0 - delta)) + ")");
    }
    return std::min({beta_main(delta), beta3(n, q), beta3(n / (n / q + delta), q)});
}

double DecayConstants::star_impl(std::array<double, 5> k) const {
    const double p = k[0];
    const double delta = k[1];
    require_delta(delta, "delta");
    const double n = n_;
    if (!(n / p + delta < n)) {
        throw AdmissibilityError("beta* inadmissible: n/p + delta >= n (n/p+delta=" + fmt(n / p + delta) + ")");
    }
    return std::min({beta_main(delta), beta1(p, p), beta3(n / (n / p + delta), p)});
}

double DecayConstants::dstar_impl(std::array<double, 5> k) const {
    const double p = k[0];
    const double delta = k[1];
    require_delta(delta, "delta");
    const double n = n_;
    if (!(n / p + delta < n)) {
        throw AdmissibilityError("beta** inadmissible: n/p + delta >= n (n/p+delta=" + fmt(n / p + delta) + ")");
    }
    return std::min({beta_main(delta), beta3(p, p), beta3(n / (n / p + delta), p)});
}

double DecayConstants::tilde_impl(std::array<double, 5> k) const {
    const double p = k[0];
    const double q = k[1];
    const double delta = k[2];
    const double delta_p = k[3];
    const double delta_s = k[4] < 0.0 ? -k[4] : k[4];
    const bool gradient = k[4] < 0.0;
    require_delta(delta, "delta");
    require_delta(delta_p, "delta'");
    require_delta(delta_s, "delta*");
    const double n = n_;
    const double lead = n / p - n / q + (gradient ? 1.0 : 0.0) + delta;
    if (!(lead < 2.0)) {
        throw AdmissibilityError(std::string("beta~ inadmissible: n/p - n/q") + (gradient ? " + 1" : "") +
                                 " + delta >= 2 (value " + fmt(lead) + ")");
    }
    if (!(1.0 - delta_p < delta)) {
        throw AdmissibilityError("beta~ inadmissible: 1 - delta' >= delta");
    }
    if (!(n / p + delta_s < n)) {
        throw AdmissibilityError("beta~ inadmissible: n/p + delta* >= n (n/p+delta*=" + fmt(n / p + delta_s) + ")");
    }
    const double base = beta_main(delta_p);
    const double late_dprime = std::min({base, beta3(n, q), beta3(n / (delta + delta_p), n / delta_p)});
    const double late_star = std::min({base, beta1(p, p), beta3(n / (n / p + delta_s), p)});
    return std::min({base, late_star, late_dprime, beta1(p, q), beta1(n / (n / p + delta), q)});
}

double DecayConstants::beta_main(double delta) const {
    return memo(0, {delta, 0, 0, 0, 0}, &DecayConstants::main_impl);
}

double DecayConstants::beta_prime(double delta) const {
    return memo(1, {delta, 0, 0, 0, 0}, &DecayConstants::prime_impl);
}

double DecayConstants::beta_dprime(double q, double delta) const {
    return memo(2, {q, delta, 0, 0, 0}, &DecayConstants::dprime_impl);
}

double DecayConstants::beta_star(double p, double delta) const {
    return memo(3, {p, delta, 0, 0, 0}, &DecayConstants::star_impl);
}

double DecayConstants::beta_dstar(double p, double delta) const {
    return memo(4, {p, delta, 0, 0, 0}, &DecayConstants::dstar_impl);
}

double DecayConstants::beta_tilde(double p, double q, double delta, double delta_p, double delta_s,
                                  bool gradient) const {
    // The sign of the last slot carries the gradient flag.
    return memo(5, {p, q, delta, delta_p, gradient ? -delta_s : delta_s}, &DecayConstants::tilde_impl);
}

double beta_function(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) {
        throw std::invalid_argument("beta_function: arguments must be positive");
    }
    const auto f = [x, y](double, double from_a, double to_b) {
        return std::pow(from_a, x - 1.0) * std::pow(to_b, y - 1.0);
    };
    return tanh_sinh(f, 0.0, 1.0, 1e-14, 14).value;
}

double singular_integral(double t, double a, double b) {
    if (!(t > 0.0) || !(a < 1.0) || !(b < 1.0)) {
        throw std::invalid_argument("singular_integral: need t > 0 and exponents below 1");
    }
    const auto f = [a, b](double, double from_a, double to_b) {
        return std::pow(to_b, -a) * std::pow(from_a, -b);
    };
    return tanh_sinh(f, 0.0, t, 1e-14, 14).value;
}

}  // namespace hyperns
