#include "hyperns/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hyperns {

MonotoneCubic::MonotoneCubic(std::vector<double> times, std::vector<Eigen::MatrixXd> values, SlopeRule rule)
    : times_(std::move(times)), values_(std::move(values)) {
    const std::size_t n = times_.size();
    if (n < 2 || values_.size() != n) {
        throw std::invalid_argument("MonotoneCubic: need at least two samples with matching values");
    }
    for (std::size_t j = 1; j < n; ++j) {
        if (!(times_[j] > times_[j - 1])) {
            throw std::invalid_argument("MonotoneCubic: times must increase strictly");
        }
    }
    const auto rows = values_[0].rows();
    const auto cols = values_[0].cols();
    std::vector<Eigen::MatrixXd> secant(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        secant[j] = (values_[j + 1] - values_[j]) / (times_[j + 1] - times_[j]);
    }
    slopes_.assign(n, Eigen::MatrixXd::Zero(rows, cols));
    if (n == 2) {
        slopes_[0] = secant[0];
        slopes_[1] = secant[0];
        return;
    }
    if (rule == SlopeRule::bessel) {
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const double h0 = times_[j] - times_[j - 1];
            const double h1 = times_[j + 1] - times_[j];
            slopes_[j] = (h1 * secant[j - 1] + h0 * secant[j]) / (h0 + h1);
        }
        const double a0 = times_[1] - times_[0];
        const double a1 = times_[2] - times_[1];
        slopes_[0] = ((2.0 * a0 + a1) * secant[0] - a0 * secant[1]) / (a0 + a1);
        const double b0 = times_[n - 1] - times_[n - 2];
        const double b1 = times_[n - 2] - times_[n - 3];
        slopes_[n - 1] = ((2.0 * b0 + b1) * secant[n - 2] - b0 * secant[n - 3]) / (b0 + b1);
        return;
    }
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double h0 = times_[j] - times_[j - 1];
        const double h1 = times_[j + 1] - times_[j];
        const double w1 = 2.0 * h1 + h0;
        const double w2 = h1 + 2.0 * h0;
        for (Eigen::Index c = 0; c < cols; ++c) {
            for (Eigen::Index r = 0; r < rows; ++r) {
                const double d0 = secant[j - 1](r, c);
                const double d1 = secant[j](r, c);
                // Weighted harmonic mean, zero at local extrema.
                slopes_[j](r, c) = (d0 * d1 > 0.0) ? (w1 + w2) / (w1 / d0 + w2 / d1) : 0.0;
            }
        }
    }
    // One-sided three-point end slopes, limited to keep monotonicity.
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0) {
            s = 0.0;
        } else if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0)) {
            s = 3.0 * d0;
        }
        return s;
    };
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) {
            slopes_[0](r, c) = end_slope(times_[1] - times_[0], times_[2] - times_[1], secant[0](r, c), secant[1](r, c));
            slopes_[n - 1](r, c) = end_slope(times_[n - 1] - times_[n - 2], times_[n - 2] - times_[n - 3],
                                             secant[n - 2](r, c), secant[n - 3](r, c));
        }
    }
}

Eigen::MatrixXd MonotoneCubic::operator()(double t) const {
    if (t < times_.front() || t > times_.back()) {
        throw std::out_of_range("MonotoneCubic: time outside the sampled range");
    }
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t j = (it == times_.begin()) ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
    j = std::min(j, times_.size() - 2);
    const double h = times_[j + 1] - times_[j];
    const double u = (t - times_[j]) / h;
    if (u == 0.0) {
        return values_[j];
    }
    if (u == 1.0) {
        return values_[j + 1];
    }
    const double u2 = u * u;
    const double u3 = u2 * u;
    const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    const double h10 = u3 - 2.0 * u2 + u;
    const double h01 = -2.0 * u3 + 3.0 * u2;
    const double h11 = u3 - u2;
    return h00 * values_[j] + (h10 * h) * slopes_[j] + h01 * values_[j + 1] + (h11 * h) * slopes_[j + 1];
}

}  // namespace hyperns
