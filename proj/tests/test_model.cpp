#include <doctest.h>

#include <cmath>

#include "feas/errors.hpp"
#include "feas/kernel.hpp"
#include "feas/model.hpp"
#include "feas/spectral.hpp"
#include "oracles.hpp"

using namespace feas;

TEST_SUITE_BEGIN("model");

namespace {

State smooth_state(const Grid& g, std::uint64_t seed) {
    const Field rho = shifted(0.3 * oracles::random_band_limited(g, seed, 4), 1.0);
    const Field u = shifted(0.2 * oracles::random_band_limited(g, seed + 7, 4), 0.5);
    return {rho, u, 0.0};
}

} // namespace

TEST_CASE("alignment kills constant velocity") {
    const Grid g = Grid::line(64);
    const Field rho = shifted(0.4 * oracles::random_band_limited(g, 2, 5), 1.2);
    const Field u = Field::constant(g, 3.7);
    CHECK(model::alignment_term(u, rho, 1.0).linf() <= 1e-12);
    CHECK(model::alignment_term(u, rho, 1.0, AlignmentPath::kernel).linf() <= 1e-12);
}

TEST_CASE("alignment with constant density reduces to -c Lambda^a u") {
    const Grid g = Grid::line(64);
    const double c = 1.7;
    const Field rho = Field::constant(g, c);
    const Field u = Field::sample(g, [](double x, double) { return std::sin(x); });
    const Field got = model::alignment_term(u, rho, 1.0);
    const Field expect = -c * u; // Lambda sin = sin
    CHECK((got - expect).linf() <= 1e-12);
}

TEST_CASE("alignment is invariant under velocity shifts") {
    const Grid g = Grid::line(128);
    const State s = smooth_state(g, 5);
    const Field a = model::alignment_term(s.u, s.rho, 1.0);
    const Field b = model::alignment_term(shifted(s.u, 2.9), s.rho, 1.0);
    CHECK((a - b).linf() <= 1e-11);
}

TEST_CASE("alignment spectral and kernel paths agree") {
    const Grid g = Grid::line(256);
    const Field rho = shifted(0.3 * oracles::random_band_limited(g, 21, 8), 1.0);
    const Field u = 0.5 * oracles::random_band_limited(g, 22, 8);
    bool warn = true;
    const Field ks = model::alignment_term(u, rho, 1.0, AlignmentPath::kernel, &warn);
    CHECK_FALSE(warn);
    const Field sp = model::alignment_term(u, rho, 1.0);
    CHECK((ks - sp).linf() <= 1e-3 * sp.linf());
}

TEST_CASE("kernel path warns on rough input") {
    const Grid g = Grid::line(64);
    const Field rho = shifted(0.3 * oracles::random_band_limited(g, 1, 30), 1.0);
    const Field u = oracles::random_band_limited(g, 2, 30);
    bool warn = false;
    model::alignment_term(u, rho, 1.0, AlignmentPath::kernel, &warn);
    CHECK(warn);
}

TEST_CASE("alignment dissipativity") {
    const Grid g = Grid::line(128);
    for (std::uint64_t seed : {1u, 4u, 9u}) {
        const State s = smooth_state(g, seed);
        const Field c = model::alignment_term(s.u, s.rho, 1.0);
        CHECK(inner(multiply(s.rho, s.u), c) <= 1e-10);
    }
}

TEST_CASE("rhs of the steady flock vanishes") {
    const Grid g = Grid::line(64);
    const State s{Field::constant(g, 1.3), Field::constant(g, 0.8), 0.0};
    const model::Rhs r = model::rhs(s, 1.0);
    CHECK(r.drho_dt.linf() <= 1e-14);
    CHECK(r.du_dt.linf() <= 1e-14);
}

TEST_CASE("rhs closed form for rho = 1, u = sin") {
    const Grid g = Grid::line(128);
    const State s{Field::constant(g, 1.0),
                  Field::sample(g, [](double x, double) { return std::sin(x); }), 0.0};
    const model::Rhs r = model::rhs(s, 1.0);
    const Field drho = Field::sample(g, [](double x, double) { return -std::cos(x); });
    const Field du = Field::sample(
        g, [](double x, double) { return -std::sin(x) * std::cos(x) - std::sin(x); });
    CHECK((r.drho_dt - drho).linf() <= 1e-12);
    CHECK((r.du_dt - du).linf() <= 1e-12);
}

TEST_CASE("rhs conserves mass and momentum semi-discretely") {
    const Grid g = Grid::line(256);
    for (std::uint64_t seed : {3u, 8u}) {
        const State s = smooth_state(g, seed);
        const model::Rhs r = model::rhs(s, 1.0);
        CHECK(std::abs(r.drho_dt.integral()) <= 1e-12);
        const double dm = inner(s.rho, r.du_dt) + inner(s.u, r.drho_dt);
        CHECK(std::abs(dm) <= 1e-10);
    }
}

TEST_CASE("rhs rejects vacuum") {
    const Grid g = Grid::line(64);
    const State s{Field::constant(g, -0.1), Field::zeros(g), 0.0};
    CHECK_THROWS_AS(model::rhs(s, 1.0), StateError);
}

TEST_CASE("entropy of constant state vanishes") {
    const Grid g = Grid::line(64);
    const State s{Field::constant(g, 2.0), Field::constant(g, 1.0), 0.0};
    const Entropy e = model::entropy_of(s, 1.0);
    CHECK(e.e.linf() <= 1e-14);
    CHECK(e.q.linf() <= 1e-14);
}

TEST_CASE("constructed null-entropy pair") {
    const Grid g = Grid::line(128);
    const State s{
        Field::sample(g, [](double x, double) { return 1.0 + 0.1 * std::cos(x); }),
        Field::sample(g, [](double x, double) { return 0.1 * std::sin(x); }), 0.0};
    const Entropy e = model::entropy_of(s, 1.0);
    CHECK(e.e.linf() <= 1e-13);
}

TEST_CASE("entropy matches difference oracle") {
    const Grid g = Grid::line(256);
    const State s = smooth_state(g, 12);
    const Entropy ent = model::entropy_of(s, 1.0);
    // Centered-difference d1 u minus the quadrature Lambda rho.
    const Field lam = kernel::quadrature_frac_laplacian(s.rho, 1.0);
    std::vector<double> d(static_cast<std::size_t>(g.total()));
    const double h = g.dx(0);
    for (int i = 0; i < g.size(0); ++i) {
        const int ip = (i + 1) % g.size(0);
        const int im = (i + g.size(0) - 1) % g.size(0);
        d[static_cast<std::size_t>(i)] =
            (s.u.values()[static_cast<std::size_t>(ip)] -
             s.u.values()[static_cast<std::size_t>(im)]) /
            (2.0 * h);
    }
    const Field approx = Field::from_values(g, std::move(d)) - lam;
    CHECK((ent.e - approx).linf() <= 1e-3 * std::max(1.0, ent.e.linf()));
}

TEST_CASE("compatibility residual") {
    const Grid g = Grid::line(128);
    const State s = smooth_state(g, 31);
    const Entropy ent = model::entropy_of(s, 1.0);
    CHECK(model::check_compatibility(s.rho, s.u, ent.e, 1.0) <= 1e-10);

    // A constant offset d in e is caught by the phi = 1 test function with
    // response d * (2 pi)^n over the norm scale.
    for (double d : {0.1, 0.2}) {
        const Field pert = shifted(ent.e, d);
        const double scale = 1.0 + s.rho.lp_norm(2.0) + s.u.lp_norm(2.0) + pert.lp_norm(2.0);
        const double r = model::check_compatibility(s.rho, s.u, pert, 1.0);
        CHECK(r == doctest::Approx(d * two_pi / scale).epsilon(1e-6));
    }

    const Field z = Field::zeros(g);
    CHECK(model::check_compatibility(z, z, z, 1.0) == 0.0);
}

TEST_CASE("null entropy velocity closed form") {
    const Grid g = Grid::line(128);
    const Field rho =
        Field::sample(g, [](double x, double) { return 1.0 + 0.25 * std::cos(x); });
    const Field u = model::null_entropy_velocity(rho, 2.0, 1.0);
    const Field expect =
        Field::sample(g, [](double x, double) { return 2.0 + 0.25 * std::sin(x); });
    CHECK((u - expect).linf() <= 1e-12);

    const Field uc = model::null_entropy_velocity(Field::constant(g, 1.5), 0.7, 1.0);
    CHECK((uc - Field::constant(g, 0.7)).linf() <= 1e-14);
}

TEST_CASE("null entropy velocity in 2D") {
    const Grid g = Grid::plane(32, 32);
    const Field rho = Field::sample(
        g, [](double x, double y) { return 1.0 + 0.2 * std::cos(x) * std::cos(y); });
    const Field u = model::null_entropy_velocity(rho, 0.0, 1.0);
    const Entropy ent = model::entropy_of({rho, u, 0.0}, 1.0);
    CHECK(ent.e.linf() <= 1e-10);
    const Field expect = Field::sample(g, [](double x, double y) {
        return std::sqrt(2.0) * 0.2 * std::sin(x) * std::cos(y);
    });
    CHECK((u - expect).linf() <= 1e-12);
}

TEST_CASE("null entropy solvability rejection") {
    const Grid g = Grid::plane(32, 32);
    const Field rho =
        Field::sample(g, [](double, double y) { return 1.0 + 0.3 * std::cos(y); });
    CHECK_THROWS_AS(model::null_entropy_velocity(rho, 0.0, 1.0), SolvabilityError);
    const Field fixed = model::project_to_solvable(rho);
    CHECK(model::null_entropy_velocity(fixed, 0.0, 1.0).linf() <= 1e-12);
}

TEST_CASE("make_initial_data determinism and floor") {
    const Grid g = Grid::line(128);
    ICRecipe r;
    r.kind = ICRecipe::Kind::trig_polynomial;
    r.seed = 7;
    r.n_modes = 4;
    r.rho_floor = 0.5;
    r.amplitude = 0.3;
    const State a = model::make_initial_data(r, g, 1.0);
    const State b = model::make_initial_data(r, g, 1.0);
    CHECK(a.rho.min() >= 0.5 - 1e-12);
    CHECK((a.rho - b.rho).linf() == 0.0);
    CHECK((a.u - b.u).linf() == 0.0);

    r.seed = 8;
    const State c = model::make_initial_data(r, g, 1.0);
    CHECK((a.rho - c.rho).linf() > 1e-6);
}

TEST_CASE("make_initial_data null entropy with shear") {
    const Grid g = Grid::line(128);
    ICRecipe r;
    r.kind = ICRecipe::Kind::null_entropy;
    r.seed = 3;
    r.ubar = 1.0;
    r.e0_amplitude = 0.05;
    const State s = model::make_initial_data(r, g, 1.0);
    const Entropy ent = model::entropy_of(s, 1.0);
    CHECK(ent.e.linf() == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(model::mean_velocity(s) == doctest::Approx(1.0).epsilon(0.2));
}

TEST_SUITE_END();
