#pragma once

#include <Eigen/Dense>

#include <vector>

namespace hyperns {

/// Node slopes of a piecewise cubic Hermite interpolant.
enum class SlopeRule {
    /// Fritsch-Carlson: weighted harmonic mean of the secants, zero at local extrema.
    /// Preserves monotonicity of the data but depends nonlinearly on it.
    monotone,
    /// Three-point (Bessel) derivative; the interpolant is linear in the data.
    bessel,
};

/// Piecewise cubic Hermite interpolation in time, applied independently to every entry
/// of a sequence of equally shaped matrices.
class MonotoneCubic {
public:
    MonotoneCubic(std::vector<double> times, std::vector<Eigen::MatrixXd> values,
                  SlopeRule rule = SlopeRule::monotone);

    [[nodiscard]] Eigen::MatrixXd operator()(double t) const;
    [[nodiscard]] double t_min() const { return times_.front(); }
    [[nodiscard]] double t_max() const { return times_.back(); }

private:
    std::vector<double> times_;
    std::vector<Eigen::MatrixXd> values_;
    std::vector<Eigen::MatrixXd> slopes_;
};

}  // namespace hyperns
