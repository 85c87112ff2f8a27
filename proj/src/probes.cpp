#include "hyperns/probes.hpp"

#include <cmath>

namespace hyperns {

namespace {

struct Envelope {
    double x0, y0, width2;
    double operator()(double rho, double theta) const {
        const double x = rho * std::cos(theta) - x0;
        const double y = rho * std::sin(theta) - y0;
        return std::exp(-(x * x + y * y) / width2);
    }
};

Envelope random_envelope(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> offset(-0.6, 0.6);
    std::uniform_real_distribution<double> width(0.45, 0.7);
    const double x0 = offset(rng);
    const double y0 = offset(rng);
    return {x0, y0, width(rng)};
}

}  // namespace

StreamFunction random_stream_function(const GridPtr& grid, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    double a[4], b[4];
    for (int m = 0; m < 4; ++m) {
        a[m] = coef(rng);
        b[m] = (m == 0) ? 0.0 : coef(rng);
    }
    const Envelope env = random_envelope(rng);
    return StreamFunction::sample(grid, [&](double rho, double theta) {
        double v = 0.0;
        const double r = std::tanh(0.5 * rho);
        double rm = 1.0;
        for (int m = 0; m < 4; ++m) {
            v += rm * (a[m] * std::cos(m * theta) + b[m] * std::sin(m * theta));
            rm *= r;
        }
        return v * env(rho, theta);
    });
}

OneForm random_divfree_field(const GridPtr& grid, std::mt19937_64& rng) {
    return stream_to_oneform(random_stream_function(grid, rng));
}

OneForm random_one_form(const GridPtr& grid, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    double cx[3], cy[3];
    for (int k = 0; k < 3; ++k) {
        cx[k] = coef(rng);
        cy[k] = coef(rng);
    }
    const Envelope ex = random_envelope(rng);
    const Envelope ey = random_envelope(rng);
    const PolarGrid& g = *grid;
    NodeMatrix wr(static_cast<Eigen::Index>(g.n_rho()), static_cast<Eigen::Index>(g.n_theta()));
    NodeMatrix wt(wr.rows(), wr.cols());
    for (std::size_t i = 0; i < g.n_rho(); ++i) {
        const double rho = g.rho(i);
        const double chart = rho / g.sinh_rho(i);
        for (std::size_t k = 0; k < g.n_theta(); ++k) {
            const double th = g.theta(k);
            const double x = rho * std::cos(th);
            const double y = rho * std::sin(th);
            const double wx = ex(rho, th) * (cx[0] + cx[1] * x + cx[2] * y * y);
            const double wy = ey(rho, th) * (cy[0] + cy[1] * x * y + cy[2] * y);
            const auto ii = static_cast<Eigen::Index>(i);
            const auto kk = static_cast<Eigen::Index>(k);
            wr(ii, kk) = wx * std::cos(th) + wy * std::sin(th);
            wt(ii, kk) = chart * (-wx * std::sin(th) + wy * std::cos(th));
        }
    }
    return OneForm(grid, std::move(wr), std::move(wt));
}

ScalarField random_bump(const GridPtr& grid, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const double c0 = coef(rng);
    const double c1 = coef(rng);
    const double c2 = coef(rng);
    const Envelope env = random_envelope(rng);
    return ScalarField::sample(grid, [&](double rho, double theta) {
        const double x = rho * std::cos(theta);
        const double y = rho * std::sin(theta);
        return env(rho, theta) * (c0 + c1 * x + c2 * x * y);
    });
}

ScalarField random_unit_interval_field(const GridPtr& grid, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    const double c0 = coef(rng);
    const double c1 = coef(rng);
    const double c2 = coef(rng);
    const Envelope env = random_envelope(rng);
    return ScalarField::sample(grid, [&](double rho, double theta) {
        const double x = rho * std::cos(theta);
        const double y = rho * std::sin(theta);
        return 0.5 * (1.0 + std::tanh(env(rho, theta) * (c0 + c1 * x + c2 * y) - 0.5));
    });
}

}  // namespace hyperns
