#pragma once

#include <array>

#include "feas/field.hpp"

namespace feas::kernel {

/// Normalization c_{n,alpha} making the principal-value integral against
/// |z|^{-(n+alpha)} equal to the |k|^alpha multiplier. Requires alpha in (0,2).
double multiplier_constant(int n, double alpha);

/// Periodized kernel phi_alpha(z) = sum_k |z + 2 pi k|^{-(n+alpha)} on T^n,
/// truncated at |k|_inf <= images with an analytic tail correction.
double periodized(const std::array<double, 2>& z, int n, double alpha, int images);

/// Infimum of phi_alpha over the torus (attained at the far corner).
double periodized_inf(int n, double alpha, int images = 64);

/// Infimum of the normalized kernel c_{n,alpha} phi_alpha.
double normalized_inf(int n, double alpha);

/// Independent quadrature evaluation of Lambda^alpha f from the
/// principal-value form, with a second-difference correction for the
/// singular cell. Agreement with the multiplier path is O(1e-4..1e-3)
/// on resolved fields; this is the oracle, not the main path.
Field quadrature_frac_laplacian(const Field& f, double alpha);

/// Quadrature form of the alignment operator
/// c_{n,alpha} p.v. int (u(x+z)-u(x)) rho(x+z) phi_alpha(z) dz.
/// Sets *under_resolved when the inputs carry significant top-octave energy.
Field quadrature_alignment(const Field& u, const Field& rho, double alpha,
                           bool* under_resolved = nullptr);

/// D(grad u)(x) = int |grad u(x+z) - grad u(x)|^2 phi_1(z) dz, the alpha = 1
/// dissipation entering the nonlinear maximum principle.
Field grad_dissipation(const Field& u);

} // namespace feas::kernel
