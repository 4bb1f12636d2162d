#include <doctest.h>

#include <cmath>

#include "feas/diagnostics.hpp"
#include "feas/flux.hpp"
#include "oracles.hpp"

using namespace feas;

TEST_SUITE_BEGIN("flux");

namespace {

Trajectory null_run(const Grid& g, std::uint64_t seed, double t_end, int record_every) {
    ICRecipe r;
    r.kind = ICRecipe::Kind::null_entropy;
    r.seed = seed;
    r.ubar = 1.0;
    const State s0 = model::make_initial_data(r, g, 1.0);
    SchemeSpec spec;
    spec.t_end = t_end;
    spec.record_every = record_every;
    return timestepper::integrate(s0, 1.0, spec);
}

} // namespace

TEST_CASE("filtered energy identity regime") {
    const Grid g = Grid::line(128);
    const State s{shifted(0.3 * oracles::random_band_limited(g, 3, 4), 1.0),
                  shifted(0.4 * oracles::random_band_limited(g, 4, 4), 0.7), 0.0};
    const int qmax = spectral::lp_qmax(g, spectral::LpMode::anisotropic_x1);
    const auto e = flux::filtered_energy(s, qmax);
    REQUIRE_FALSE(e.vacuum);
    const double exact = 0.5 * inner(multiply(s.rho, s.u), s.u);
    CHECK(e.value == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("filtered energy closed forms") {
    const Grid g = Grid::line(128);
    const State s{Field::constant(g, 1.0),
                  Field::sample(g, [](double x, double) { return std::cos(x); }), 0.0};
    CHECK(flux::filtered_energy(s, 5).value == doctest::Approx(M_PI / 2.0).epsilon(1e-12));

    // Q = -1 keeps only the x1-mean: E = P^2 / (2 M).
    const State s2{shifted(0.3 * oracles::random_band_limited(g, 8, 4), 1.0),
                   shifted(0.4 * oracles::random_band_limited(g, 9, 4), 0.7), 0.0};
    const double P = model::momentum(s2);
    const double M = model::mass(s2);
    CHECK(flux::filtered_energy(s2, -1).value ==
          doctest::Approx(P * P / (2.0 * M)).epsilon(1e-12));
}

TEST_CASE("filtered vacuum is flagged, not fatal") {
    const Grid g = Grid::line(128);
    // A narrow positive bump over a thin base: the low-pass rings negative.
    const Field rho = Field::sample(g, [](double x, double) {
        return 0.02 + 2.0 * std::exp(-8.0 * (x - M_PI) * (x - M_PI));
    });
    REQUIRE(rho.min() > 0.0);
    const State s{rho, Field::constant(g, 1.0), 0.0};
    CHECK(flux::filtered_energy(s, 0).vacuum);
}

TEST_CASE("flux vanishes in fully captured regimes") {
    const Grid g = Grid::line(128);
    // Single low mode with Q high enough that all products are captured.
    const State s{Field::constant(g, 1.0),
                  Field::sample(g, [](double x, double) { return std::cos(x); }), 0.0};
    const auto p = flux::flux_PiQ(s, 5);
    REQUIRE_FALSE(p.vacuum);
    CHECK(std::abs(p.value) <= 1e-10);

    // Constant velocity: d1 U = 0.
    const State s2{shifted(0.3 * oracles::random_band_limited(g, 5, 5), 1.0),
                   Field::constant(g, 2.0), 0.0};
    CHECK(std::abs(flux::flux_PiQ(s2, 2).value) <= 1e-12);
}

TEST_CASE("flux decays beyond the active spectrum") {
    const Grid g = Grid::line(256);
    const Trajectory traj = null_run(g, 6, 1.0, 8);
    REQUIRE_FALSE(traj.blew_up);
    const double ekin0 = 0.5 * inner(multiply(traj.snapshots[0].rho, traj.snapshots[0].u),
                                     traj.snapshots[0].u);
    const int qmax = spectral::lp_qmax(g, spectral::LpMode::anisotropic_x1);
    for (const State& s : traj.snapshots)
        CHECK(std::abs(flux::flux_PiQ(s, qmax).value) <= 1e-6 * ekin0);
}

TEST_CASE("alignment transfer limits") {
    const Grid g = Grid::line(128);
    // Constant u: no transfer at any Q.
    {
        Trajectory traj;
        traj.alpha = 1.0;
        for (double t : {0.0, 0.5, 1.0})
            traj.snapshots.push_back({shifted(0.2 * oracles::random_band_limited(g, 2, 4), 1.0),
                                      Field::constant(g, 1.5), t});
        for (int Q : {-1, 0, 2, 4}) {
            const auto eps = flux::alignment_transfer_epsQ(traj, Q);
            for (double v : eps) CHECK(std::abs(v) <= 1e-12);
        }
    }
    // Q at the Nyquist scale reproduces half the accumulated velocity
    // dissipation (the balance-law share of the symmetrized integral).
    {
        const Trajectory traj = null_run(g, 12, 1.0, 2);
        REQUIRE_FALSE(traj.blew_up);
        const int qmax = spectral::lp_qmax(g, spectral::LpMode::anisotropic_x1);
        const auto eps = flux::alignment_transfer_epsQ(traj, qmax);
        double acc = 0.0;
        double prev = diag::dissipation_velocity(traj.snapshots[0].rho, traj.snapshots[0].u, 1.0);
        for (std::size_t i = 1; i < traj.snapshots.size(); ++i) {
            const double cur =
                diag::dissipation_velocity(traj.snapshots[i].rho, traj.snapshots[i].u, 1.0);
            acc += 0.25 * (traj.snapshots[i].time - traj.snapshots[i - 1].time) * (cur + prev);
            prev = cur;
            CHECK(eps[i] == doctest::Approx(acc).epsilon(1e-3));
        }
    }
}

TEST_CASE("identity regime: filtered transfer equals the unfiltered one") {
    const Grid g = Grid::line(128);
    const State s{shifted(0.2 * oracles::random_band_limited(g, 30, 3), 1.0),
                  shifted(0.3 * oracles::random_band_limited(g, 31, 3), 0.5), 0.0};
    // Two identical snapshots a unit of time apart turn the trapezoid into
    // the plain integrand value.
    Trajectory traj;
    traj.alpha = 1.0;
    traj.snapshots.push_back(s);
    traj.snapshots.push_back({s.rho, s.u, 1.0});
    const int qmax = spectral::lp_qmax(g, spectral::LpMode::anisotropic_x1);
    const auto eps = flux::alignment_transfer_epsQ(traj, qmax);
    const Field c = model::alignment_term(s.u, s.rho, 1.0);
    const double unfiltered = -inner(multiply(s.rho, c), s.u);
    CHECK(eps[1] == doctest::Approx(unfiltered).epsilon(1e-10));
}

TEST_CASE("budget closure on the steady flock") {
    const Grid g = Grid::line(64);
    Trajectory traj;
    traj.alpha = 1.0;
    for (double t : {0.0, 0.5, 1.0})
        traj.snapshots.push_back({Field::constant(g, 1.0), Field::constant(g, 0.5), t});
    const auto b = flux::budget_closure(traj, 3);
    for (std::size_t i = 0; i < b.t.size(); ++i) {
        CHECK(std::abs(b.residual[i]) <= 1e-12);
        CHECK(std::abs(b.flux_int[i]) <= 1e-12);
        CHECK(std::abs(b.eps_Q[i]) <= 1e-12);
    }
}

TEST_CASE("budget closure residual shrinks with cadence") {
    const Grid g = Grid::line(128);
    auto worst_residual = [&](int cadence, int Q) {
        const Trajectory traj = null_run(g, 20, 1.0, cadence);
        const auto b = flux::budget_closure(traj, Q);
        double m = 0.0;
        for (double v : b.residual) m = std::max(m, std::abs(v));
        return m;
    };
    for (int Q : {2, 6}) {
        const double coarse = worst_residual(16, Q);
        const double fine = worst_residual(4, Q);
        CHECK(fine <= coarse / 8.0);
    }
}

TEST_CASE("budget closure in 2D") {
    const Grid g = Grid::plane(32, 32);
    ICRecipe r;
    r.kind = ICRecipe::Kind::null_entropy;
    r.seed = 4;
    r.ubar = 0.5;
    const State s0 = model::make_initial_data(r, g, 1.0);
    SchemeSpec spec;
    spec.t_end = 0.5;
    spec.record_every = 2;
    const Trajectory traj = timestepper::integrate(s0, 1.0, spec);
    REQUIRE_FALSE(traj.blew_up);
    const double ekin0 =
        0.5 * inner(multiply(traj.snapshots[0].rho, traj.snapshots[0].u), traj.snapshots[0].u);
    for (int Q : {2, spectral::lp_qmax(g, spectral::LpMode::anisotropic_x1)}) {
        const auto b = flux::budget_closure(traj, Q);
        for (std::size_t i = 0; i < b.residual.size(); ++i)
            if (!b.vacuum[i]) CHECK(std::abs(b.residual[i]) <= 1e-3 * ekin0);
    }
}

TEST_CASE("onsager indicator") {
    const Grid g = Grid::line(256);
    const auto zero = flux::onsager_indicator(Field::zeros(g));
    CHECK(zero.seminorm == 0.0);
    for (const auto& e : zero.tail) CHECK(e.value == 0.0);

    const Field f = Field::sample(g, [](double x, double) { return std::cos(x); });
    const auto ind = flux::onsager_indicator(f);
    CHECK(ind.seminorm == doctest::Approx(f.lp_norm(3.0)).epsilon(1e-12));

    const Field smooth = Field::sample(g, [](double x, double) {
        double s = 0.0;
        for (int k = 1; k <= 60; ++k) s += std::exp(-k / 2.5) * std::cos(k * x);
        return s;
    });
    const auto sm = flux::onsager_indicator(smooth);
    CHECK(sm.tail.back().value <= 1e-8);
}

TEST_SUITE_END();
