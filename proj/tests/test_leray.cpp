#include "hyperns/calculus.hpp"
#include "hyperns/leray.hpp"
#include "hyperns/one_form.hpp"
#include "hyperns/probes.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace hyperns;
using hyperns::test::desk_grid;
using hyperns::test::rel_l2;

namespace {

double radial_variation(const ScalarField& f) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < f.values().rows(); ++i) {
        const auto row = f.values().row(i);
        worst = std::max(worst, row.maxCoeff() - row.minCoeff());
    }
    return worst;
}

double max_projection_ratio(const GridPtr& g, double p, int fields) {
    std::mt19937_64 rng(77);
    double worst = 0.0;
    for (int i = 0; i < fields; ++i) {
        const OneForm w = random_one_form(g, rng);
        worst = std::max(worst, lp_norm(project(w), p) / lp_norm(w, p));
    }
    return worst;
}

}  // namespace

TEST_CASE("Green function") {
    CHECK(green_function(1.0) == doctest::Approx(std::log(1.0 / std::tanh(0.5)) / (2 * std::numbers::pi)).epsilon(1e-15));
    const GreenTable t = GreenTable::sample({0.1, 0.5, 1.0, 2.0, 4.0});
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        CHECK(t.values[i] > 0.0);
        if (i > 0) {
            CHECK(t.values[i] < t.values[i - 1]);
        }
    }
}

TEST_CASE("codifferential") {
    const auto& g = desk_grid();
    std::mt19937_64 rng(9);
    const OneForm u = random_divfree_field(g, rng);
    CHECK(relative_divergence(u) < 1e-6);

    const ScalarField phi = ScalarField::sample(g, [](double r, double) { return std::exp(-r * r); });
    const ScalarField lap = ScalarField::sample(g, [](double r, double) {
        return std::exp(-r * r) * (4 * r * r - 2) + (std::cosh(r) / std::sinh(r)) * (-2 * r * std::exp(-r * r));
    });
    const ScalarField d_star = codifferential(exterior_derivative(phi));
    CHECK(rel_l2(d_star, -1.0 * lap, lap) < 1e-8);

    const OneForm w1 = random_one_form(g, rng), w2 = random_one_form(g, rng);
    const ScalarField lin = codifferential(w1 + 2.0 * w2) - (codifferential(w1) + 2.0 * codifferential(w2));
    CHECK(lp_norm(lin, 2.0) <= 1e-12 * lp_norm(codifferential(w1), 2.0));
}

TEST_CASE("inverse Laplacian") {
    CHECK(lp_norm(green_inverse_laplacian(ScalarField(desk_grid())), 2.0) == 0.0);
    auto f_of = [](double r, double th) { return std::exp(-r * r / 2) * (1 + 0.5 * r * std::cos(th) + 0.3 * r * r * std::sin(2 * th)); };
    for (const std::size_t n : {64u, 128u}) {
        const GridPtr g = PolarGrid::create({2, 8.0, n, n});
        const ScalarField f = ScalarField::sample(g, f_of);
        const ScalarField phi = green_inverse_laplacian(f);
        const double res = lp_norm(laplacian(phi) + f, 2.0) / lp_norm(f, 2.0);
        CHECK(res < (n == 64 ? 1e-2 : 1e-3));
    }

    const ScalarField radial = ScalarField::sample(desk_grid(), [](double r, double) { return std::exp(-r * r); });
    CHECK(radial_variation(green_inverse_laplacian(radial)) < 1e-10);
}

TEST_CASE("projection") {
    const auto& g = desk_grid();
    std::mt19937_64 rng(15);
    for (int i = 0; i < 10; ++i) {
        const OneForm w = random_one_form(g, rng);
        const OneForm pw = project(w);
        CHECK(pw.divergence_free());
        CHECK(relative_divergence(pw) < 1e-4);
        CHECK(rel_l2(project(pw), pw, w) < 1e-4);

        const OneForm u = random_divfree_field(g, rng);
        CHECK(rel_l2(project(u), u, u) < 1e-5);

        const ScalarField phi = random_bump(g, rng);
        const OneForm grad = exterior_derivative(phi);
        CHECK(lp_norm(project(grad), 2.0) < 1e-2 * lp_norm(grad, 2.0));
    }
}

TEST_CASE("projection commutes with the semigroup") {
    const auto& g = desk_grid();
    std::mt19937_64 rng(16);
    for (int i = 0; i < 5; ++i) {
        const OneForm w = random_one_form(g, rng);
        for (const double t : {0.2, 1.0}) {
            const OneForm a = apply_L_semigroup_divfree(project(w), t);
            const OneForm b = project(apply_L_semigroup(w, t));
            CHECK(rel_l2(a, b, w) < 1e-3);
        }
    }
}

TEST_CASE("harmonic potential projects onto closed and coclosed forms") {
    const auto& g = desk_grid();
    std::mt19937_64 rng(17);
    const OneForm pw = project(random_one_form(g, rng));
    const OneForm h = star_d(g, harmonic_potential(pw));
    CHECK(lp_norm(curl(h), 2.0) < 1e-6 * lp_norm(pw, 2.0));
    CHECK(relative_divergence(h) < 1e-8);
    const OneForm coexact = star_d(g, recover_stream_function(pw));
    CHECK(rel_l2(coexact + h, pw, pw) < 1e-3);
}

TEST_CASE("L^p boundedness of the projection is grid stable") {
    const GridPtr coarse = desk_grid();
    const GridPtr fine = PolarGrid::create({2, 8.0, 128, 128});
    for (const double p : {1.5, 2.0, 3.0}) {
        const double a = max_projection_ratio(coarse, p, 100);
        const double b = max_projection_ratio(fine, p, 100);
        CHECK(std::max(a, b) / std::min(a, b) < 1.2);
    }
}
