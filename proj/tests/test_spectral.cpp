#include <doctest.h>

#include <cmath>
#include <random>

#include "feas/errors.hpp"
#include "feas/kernel.hpp"
#include "feas/spectral.hpp"
#include "oracles.hpp"

using namespace feas;
using spectral::LpMode;

TEST_SUITE_BEGIN("spectral");

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(Grid::line(6), ParameterError);
    CHECK_THROWS_AS(Grid::line(100), ParameterError);
    CHECK_THROWS_AS(Grid::plane(64, 48), ParameterError);
    const Grid g = Grid::plane(16, 32);
    CHECK(g.total() == 512);
    CHECK(g.kmax() == doctest::Approx(std::sqrt(8.0 * 8.0 + 16.0 * 16.0)));
    CHECK(g.wavenumber(0, 9) == -7);
}

TEST_CASE("round trip and Parseval") {
    const Grid g = Grid::line(128);
    const Field f = oracles::random_band_limited(g, 11, 20);
    const Field back = Field::from_spectral(g, std::vector<std::complex<double>>(f.spectral()));
    double diff = 0.0;
    for (std::size_t i = 0; i < f.values().size(); ++i)
        diff = std::max(diff, std::abs(f.values()[i] - back.values()[i]));
    CHECK(diff <= 1e-12 * f.linf());

    double spec_sum = 0.0;
    for (long i = 0; i < f.spec_size(); ++i)
        spec_sum += f.mode(i).weight * std::norm(f.spectral()[static_cast<std::size_t>(i)]);
    const double l2sq = inner(f, f);
    CHECK(std::abs(l2sq - g.domain_volume() * spec_sum) <= 1e-12 * l2sq);
}

TEST_CASE("frac_laplacian on pure modes") {
    const Grid g = Grid::line(64);
    const Field f = Field::sample(g, [](double x, double) { return std::cos(3.0 * x); });
    const Field lf = spectral::frac_laplacian(f, 1.0);
    const Field expect = Field::sample(g, [](double x, double) { return 3.0 * std::cos(3.0 * x); });
    CHECK((lf - expect).linf() <= 1e-12 * expect.linf());

    const Field c = Field::constant(g, 2.5);
    CHECK(spectral::frac_laplacian(c, 1.3).linf() <= 1e-14);

    CHECK_THROWS_AS(spectral::frac_laplacian(f, 0.0), ParameterError);
    CHECK_THROWS_AS(spectral::frac_laplacian(f, 2.5), ParameterError);
}

TEST_CASE("frac_laplacian fractional exponent 2D") {
    const Grid g = Grid::plane(32, 32);
    const Field f =
        Field::sample(g, [](double x, double y) { return std::cos(x + 2.0 * y); });
    const Field lf = spectral::frac_laplacian(f, 1.5);
    const double mult = std::pow(std::sqrt(5.0), 1.5);
    const Field expect = mult * f;
    CHECK((lf - expect).linf() <= 1e-12 * expect.linf());
}

TEST_CASE("partial_x1") {
    const Grid g = Grid::line(64);
    const Field s = Field::sample(g, [](double x, double) { return std::sin(x); });
    const Field c = Field::sample(g, [](double x, double) { return std::cos(x); });
    CHECK((spectral::partial_x1(s) - c).linf() <= 1e-13);
    CHECK(spectral::partial_x1(Field::constant(g, 3.0)).linf() <= 1e-14);

    const Grid g2 = Grid::plane(16, 16);
    const Field f2 =
        Field::sample(g2, [](double x, double y) { return std::sin(x) * std::cos(y); });
    const Field d2 =
        Field::sample(g2, [](double x, double y) { return std::cos(x) * std::cos(y); });
    CHECK((spectral::partial_x1(f2) - d2).linf() <= 1e-13);
}

TEST_CASE("Lambda^alpha symmetry and positivity") {
    const Grid g = Grid::line(128);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const Field f = oracles::random_band_limited(g, seed, 15);
        const Field h = oracles::random_band_limited(g, seed + 100, 15);
        for (double alpha : {0.7, 1.0, 1.5, 2.0}) {
            const double a = inner(f, spectral::frac_laplacian(h, alpha));
            const double b = inner(h, spectral::frac_laplacian(f, alpha));
            CHECK(std::abs(a - b) <= 1e-10 * (std::abs(a) + 1.0));
            CHECK(inner(f, spectral::frac_laplacian(f, alpha)) >= -1e-12);
        }
    }
}

TEST_CASE("cutoff profile") {
    CHECK(spectral::chi(0.0) == 1.0);
    CHECK(spectral::chi(0.75) == 1.0);
    CHECK(spectral::chi(1.0) == 0.0);
    CHECK(spectral::chi(2.0) == 0.0);
    const double mid = spectral::chi(0.875);
    CHECK(mid > 0.0);
    CHECK(mid < 1.0);
    // Monotone between the plateaus.
    CHECK(spectral::chi(0.8) >= spectral::chi(0.9));
}

TEST_CASE("lp masks: support and nonnegativity") {
    for (int q = -1; q <= 6; ++q) {
        for (double xi = 0.0; xi <= 200.0; xi += 0.25) {
            const double v = spectral::lp_mask(q, xi);
            CHECK(v >= -1e-15);
            if (q >= 0) {
                const double lam = spectral::lambda_q(q);
                if (xi < 0.75 * lam - 1e-9 || xi > 2.0 * lam + 1e-9) CHECK(std::abs(v) <= 1e-15);
            }
        }
    }
}

TEST_CASE("lp_project single modes") {
    const Grid g = Grid::line(64);
    const Field f = Field::sample(g, [](double x, double) { return std::cos(x); });
    // phi_0(1) = chi(1/2) - chi(1) = 1: the whole mode sits in block 0.
    CHECK((spectral::lp_project(f, 0, LpMode::isotropic) - f).linf() <= 1e-13);
    CHECK(spectral::lp_project(f, 3, LpMode::isotropic).linf() <= 1e-15);
    CHECK_THROWS_AS(spectral::lp_project(f, spectral::lp_qmax(g, LpMode::isotropic) + 1,
                                         LpMode::isotropic),
                    RangeError);
}

TEST_CASE("partition of unity reconstruction") {
    for (LpMode mode : {LpMode::isotropic, LpMode::anisotropic_x1}) {
        const Grid g = Grid::line(128);
        const Field f = oracles::random_band_limited(g, 5, 60);
        Field sum = Field::zeros(g);
        for (int q = -1; q <= spectral::lp_qmax(g, mode); ++q)
            sum = sum + spectral::lp_project(f, q, mode);
        CHECK((sum - f).linf() <= 1e-12 * f.linf());
    }
    const Grid g2 = Grid::plane(32, 32);
    const Field f2 = oracles::random_band_limited(g2, 9, 10);
    for (LpMode mode : {LpMode::isotropic, LpMode::anisotropic_x1}) {
        Field sum2 = Field::zeros(g2);
        for (int q = -1; q <= spectral::lp_qmax(g2, mode); ++q)
            sum2 = sum2 + spectral::lp_project(f2, q, mode);
        CHECK((sum2 - f2).linf() <= 1e-12 * std::max(1.0, f2.linf()));
    }
}

TEST_CASE("besov norm closed forms") {
    const Grid g = Grid::line(256);
    const Field f = Field::sample(g, [](double x, double) { return std::cos(x); });
    const double cos_l3 = std::pow(8.0 / 3.0, 1.0 / 3.0);
    const auto res = spectral::besov_norm(f, 1.0 / 3.0, 3.0, 0.0, LpMode::isotropic);
    CHECK(res.norm == doctest::Approx(cos_l3).epsilon(1e-6));

    CHECK(spectral::besov_norm(Field::zeros(g), 1.0 / 3.0, 3.0, 0.0, LpMode::isotropic).norm ==
          0.0);

    // cos(x) + cos(8x): mode 8 lands in block q = 3 with weight 8^{1/3} = 2.
    const Field f2 =
        Field::sample(g, [](double x, double) { return std::cos(x) + std::cos(8.0 * x); });
    const Field c8 = Field::sample(g, [](double x, double) { return std::cos(8.0 * x); });
    const auto res2 = spectral::besov_norm(f2, 1.0 / 3.0, 3.0, 0.0, LpMode::anisotropic_x1);
    CHECK(res2.norm == doctest::Approx(2.0 * c8.lp_norm(3.0)).epsilon(1e-12));
    CHECK(res2.l3 == doctest::Approx(f2.lp_norm(3.0)).epsilon(1e-12));
}

TEST_CASE("c0 tail indicator") {
    const Grid g = Grid::line(128);
    // Trig polynomial with controlled exponential spectral decay.
    const Field smooth = Field::sample(g, [](double x, double) {
        double s = 0.0;
        for (int k = 1; k <= 60; ++k) s += std::exp(-k / 2.5) * std::cos(k * x);
        return s;
    });
    const auto rep = spectral::c0_tail(smooth, 1.0 / 3.0, 3.0, LpMode::isotropic);
    CHECK(rep.monotone_tail);
    CHECK(rep.seq.back().value <= 1e-8);

    std::mt19937_64 rng(3);
    std::vector<double> noise(static_cast<std::size_t>(g.total()));
    for (double& v : noise) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    const auto repn = spectral::c0_tail(Field::from_values(g, std::move(noise)), 1.0 / 3.0, 3.0,
                                        LpMode::isotropic);
    CHECK(repn.seq.back().value > 1e-4);

    const auto rep0 = spectral::c0_tail(Field::zeros(g), 1.0 / 3.0, 3.0, LpMode::isotropic);
    for (const auto& e : rep0.seq) CHECK(e.value == 0.0);
}

TEST_CASE("dealias removes the top third") {
    const Grid g = Grid::line(64);
    const Field f = Field::sample(
        g, [](double x, double) { return std::cos(3.0 * x) + std::cos(30.0 * x); });
    const Field d = spectral::dealias(f);
    const Field low = Field::sample(g, [](double x, double) { return std::cos(3.0 * x); });
    CHECK((d - low).linf() <= 1e-13);
}

TEST_SUITE_END();
