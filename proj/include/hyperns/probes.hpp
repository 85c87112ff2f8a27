#pragma once

#include "hyperns/fields.hpp"
#include "hyperns/one_form.hpp"

#include <random>

namespace hyperns {

/// Random smooth stream function: low angular modes tanh^m(rho/2)(a_m cos m theta + b_m sin m theta),
/// m <= 3, under a Gaussian envelope centred near the origin. Supported well inside the safe radius.
StreamFunction random_stream_function(const GridPtr& grid, std::mt19937_64& rng);

/// star d of random_stream_function.
OneForm random_divfree_field(const GridPtr& grid, std::mt19937_64& rng);

/// Random smooth 1-form with nonzero exact and coexact parts, built from chart components
/// w_x dx + w_y dy in geodesic normal coordinates.
OneForm random_one_form(const GridPtr& grid, std::mt19937_64& rng);

/// Random smooth compactly supported scalar bump (signed).
ScalarField random_bump(const GridPtr& grid, std::mt19937_64& rng);

/// Random smooth field with values in (0, 1).
ScalarField random_unit_interval_field(const GridPtr& grid, std::mt19937_64& rng);

}  // namespace hyperns
