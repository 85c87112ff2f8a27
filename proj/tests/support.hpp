#pragma once

#include "hyperns/fields.hpp"
#include "hyperns/geometry.hpp"

#include <cmath>

namespace hyperns::test {

// One 64 x 64 desk grid per test binary, so operator caches are shared between cases.
inline const GridPtr& desk_grid() {
    static const GridPtr g = PolarGrid::create(GridSpec{});
    return g;
}

inline double rel_l2(const OneForm& a, const OneForm& b, const OneForm& scale) {
    return lp_norm(a - b, 2.0) / lp_norm(scale, 2.0);
}

inline double rel_l2(const ScalarField& a, const ScalarField& b, const ScalarField& scale) {
    return lp_norm(a - b, 2.0) / lp_norm(scale, 2.0);
}

// Relative L^2 distance over the disc rho <= safe radius. Data there is unaffected by the truncation band.
inline double interior_rel_l2(const OneForm& a, const OneForm& b, const OneForm& scale) {
    const PolarGrid& g = a.grid();
    auto masked = [&](OneForm f) {
        for (std::size_t i = 0; i < g.n_rho(); ++i) {
            if (g.rho(i) > g.safe_radius()) {
                f.mutable_comp_rho().row(static_cast<Eigen::Index>(i)).setZero();
                f.mutable_comp_theta().row(static_cast<Eigen::Index>(i)).setZero();
            }
        }
        return f;
    };
    return lp_norm(masked(a - b), 2.0) / lp_norm(masked(scale), 2.0);
}

}  // namespace hyperns::test
