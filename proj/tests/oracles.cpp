#include "oracles.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "feas/kernel.hpp"

namespace feas::oracles {

double brute_periodized(double z1, double z2, int n, double alpha, int images) {
    double s = 0.0;
    if (n == 1) {
        for (int k = -images; k <= images; ++k)
            s += std::pow(std::abs(z1 + two_pi * k), -(1.0 + alpha));
        return s;
    }
    for (int k1 = -images; k1 <= images; ++k1)
        for (int k2 = -images; k2 <= images; ++k2)
            s += std::pow(std::hypot(z1 + two_pi * k1, z2 + two_pi * k2), -(2.0 + alpha));
    return s;
}

namespace {

// Pairwise kernel table phi_a(x_i - x_j) * c * w^2 over grid offsets.
std::vector<double> pair_weights(const Grid& g, double alpha) {
    const long n = g.total();
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    const double c = kernel::multiplier_constant(g.ndims(), alpha);
    const double vol2 = g.cell_volume() * g.cell_volume();
    if (g.ndims() == 1) {
        for (int j = 1; j < g.size(0); ++j)
            w[static_cast<std::size_t>(j)] =
                c * kernel::periodized({g.coord(0, j), 0.0}, 1, alpha, 64) * vol2;
    } else {
        for (int j1 = 0; j1 < g.size(0); ++j1)
            for (int j2 = 0; j2 < g.size(1); ++j2) {
                if (j1 == 0 && j2 == 0) continue;
                w[static_cast<std::size_t>(j1) * g.size(1) + j2] =
                    c * kernel::periodized({g.coord(0, j1), g.coord(1, j2)}, 2, alpha, 16) * vol2;
            }
    }
    return w;
}

template <typename Weight>
double pair_sum(const Grid& g, const Weight& pair_value, double alpha) {
    const std::vector<double> w = pair_weights(g, alpha);
    const int n1 = g.size(0);
    const int n2 = g.ndims() == 2 ? g.size(1) : 1;
    double acc = 0.0;
    for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2)
            for (int j1 = 0; j1 < n1; ++j1)
                for (int j2 = 0; j2 < n2; ++j2) {
                    if (j1 == 0 && j2 == 0) continue;
                    const long a = static_cast<long>(i1) * n2 + i2;
                    const long b = static_cast<long>(((i1 + j1) % n1)) * n2 + ((i2 + j2) % n2);
                    acc += pair_value(a, b) * w[static_cast<std::size_t>(j1) * n2 + j2];
                }
    return acc;
}

} // namespace

namespace {

// Diagonal-cell contribution skipped by the punctured pair sum: the
// integrand behaves like w(x) z^2 phi_alpha(z) near z = 0, so each grid
// point contributes w(x) * int_cell z^2 phi dz (1D only).
double diagonal_correction(const Grid& g, double alpha,
                           const std::function<double(long)>& weight_at) {
    const double h = g.dx(0);
    const double m2 = 2.0 * std::pow(0.5 * h, 2.0 - alpha) / (2.0 - alpha);
    const double c = kernel::multiplier_constant(1, alpha);
    double s = 0.0;
    for (long i = 0; i < g.total(); ++i) s += weight_at(i);
    return s * c * m2 * h;
}

double centered_diff(const std::vector<double>& v, long i, long n, double h) {
    return (v[static_cast<std::size_t>((i + 1) % n)] -
            v[static_cast<std::size_t>((i + n - 1) % n)]) /
           (2.0 * h);
}

} // namespace

double double_sum_density_dissipation(const Field& rho, double alpha) {
    const auto& r = rho.values();
    const double pairs = pair_sum(
        rho.grid(),
        [&](long a, long b) {
            const double d = r[static_cast<std::size_t>(a)] - r[static_cast<std::size_t>(b)];
            return (r[static_cast<std::size_t>(a)] + r[static_cast<std::size_t>(b)]) * d * d;
        },
        alpha);
    const Grid& g = rho.grid();
    double diag = 0.0;
    if (g.ndims() == 1) {
        const long n = g.total();
        diag = diagonal_correction(g, alpha, [&](long i) {
            const double dr = centered_diff(r, i, n, g.dx(0));
            return 2.0 * r[static_cast<std::size_t>(i)] * dr * dr;
        });
    }
    return 0.5 * (pairs + diag);
}

double double_sum_velocity_dissipation(const Field& rho, const Field& u, double alpha) {
    const auto& r = rho.values();
    const auto& v = u.values();
    const double pairs = pair_sum(
        rho.grid(),
        [&](long a, long b) {
            const double d = v[static_cast<std::size_t>(a)] - v[static_cast<std::size_t>(b)];
            return r[static_cast<std::size_t>(a)] * r[static_cast<std::size_t>(b)] * d * d;
        },
        alpha);
    const Grid& g = rho.grid();
    double diag = 0.0;
    if (g.ndims() == 1) {
        const long n = g.total();
        diag = diagonal_correction(g, alpha, [&](long i) {
            const double du = centered_diff(v, i, n, g.dx(0));
            const double ri = r[static_cast<std::size_t>(i)];
            return ri * ri * du * du;
        });
    }
    return pairs + diag;
}

Field random_band_limited(const Grid& g, std::uint64_t seed, int kmax) {
    std::mt19937_64 rng(seed);
    auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<double> v(static_cast<std::size_t>(g.total()), 0.0);
    for (int k = 1; k <= kmax; ++k) {
        const double a = 2.0 * u01() - 1.0;
        const double ph = two_pi * u01();
        const int k2 = g.ndims() == 2 ? static_cast<int>(u01() * (2 * kmax + 1)) - kmax : 0;
        if (g.ndims() == 1) {
            for (int i = 0; i < g.size(0); ++i)
                v[static_cast<std::size_t>(i)] += a * std::cos(k * g.coord(0, i) + ph);
        } else {
            for (int i1 = 0; i1 < g.size(0); ++i1)
                for (int i2 = 0; i2 < g.size(1); ++i2)
                    v[static_cast<std::size_t>(i1) * g.size(1) + i2] +=
                        a * std::cos(k * g.coord(0, i1) + k2 * g.coord(1, i2) + ph);
        }
    }
    return Field::from_values(g, std::move(v));
}

} // namespace feas::oracles
