#pragma once

// Test-only oracles: brute-force quadratures kept independent of the
// spectral implementation paths they check.

#include <cstdint>

#include "feas/field.hpp"

namespace feas::oracles {

/// Raw lattice sum sum_{|k|_inf <= images} |z + 2 pi k|^{-(n+alpha)} with no
/// tail correction.
double brute_periodized(double z1, double z2, int n, double alpha, int images);

/// (1/2) iint (rho(x)+rho(y)) (rho(x)-rho(y))^2 c_{n,a} phi_a(x-y) dy dx by
/// the O(N^2) double sum (diagonal cell skipped).
double double_sum_density_dissipation(const Field& rho, double alpha);

/// iint rho(x) rho(y) (u(x)-u(y))^2 c_{n,a} phi_a(x-y) dy dx, same scheme.
double double_sum_velocity_dissipation(const Field& rho, const Field& u, double alpha);

/// Deterministic band-limited test field: modes 1..kmax with seeded
/// amplitudes in [-1,1] and random phases, zero mean.
Field random_band_limited(const Grid& g, std::uint64_t seed, int kmax);

} // namespace feas::oracles
