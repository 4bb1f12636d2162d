#pragma once

#include <cstdint>
#include <string>

#include "feas/field.hpp"

namespace feas {

/// One instant of the unidirectional flow: density and the scalar velocity
/// component along e1.
struct State {
    Field rho;
    Field u;
    double time = 0.0;
};

/// Conserved entropy e = d1 u - Lambda^alpha rho and its transported ratio
/// q = e / rho.
struct Entropy {
    Field e;
    Field q;
};

enum class AlignmentPath { spectral, kernel };

/// Initial-condition recipes reproducible from a seed.
struct ICRecipe {
    enum class Kind { trig_polynomial, null_entropy, snapshot };
    Kind kind = Kind::trig_polynomial;
    std::uint64_t seed = 1;
    int n_modes = 4;
    double rho_floor = 0.5;
    double amplitude = 0.3;
    double ubar = 0.0;
    // Extra velocity shear d * sin(x1) on top of the null-entropy profile,
    // giving |e0|_inf = d exactly.
    double e0_amplitude = 0.0;
    std::string snapshot_path;
};

namespace model {

double mass(const State& s);
double momentum(const State& s);
double mean_velocity(const State& s); // ubar = P / M

/// Alignment operator C_alpha(u, rho) = -Lambda^a(rho u) + Lambda^a(rho) u.
/// The kernel path evaluates the periodized principal-value form by
/// quadrature and flags under-resolved inputs through *accuracy_warning.
Field alignment_term(const Field& u, const Field& rho, double alpha,
                     AlignmentPath path = AlignmentPath::spectral,
                     bool* accuracy_warning = nullptr);

struct Rhs {
    Field drho_dt;
    Field du_dt;
};

/// Semi-discrete right-hand side of the unidirectional system with 2/3-rule
/// dealiasing on every quadratic product.
Rhs rhs(const State& s, double alpha);

Entropy entropy_of(const State& s, double alpha);

/// Weak-form compatibility residual over a battery of low trig modes,
/// normalized by the field norms. Zero (1e-10) for e = d1 u - Lambda^a rho.
double check_compatibility(const Field& rho, const Field& u, const Field& e, double alpha);

/// Velocity with pointwise-zero entropy: uhat(k) = |k|^a rhohat(k)/(i k1),
/// mean ubar. Rejects densities with k1 = 0 (or Nyquist-k1) content.
Field null_entropy_velocity(const Field& rho0, double ubar, double alpha);

/// Zero the spectral content that obstructs null-entropy solvability
/// (explicit opt-in; the constructor above never alters data silently).
Field project_to_solvable(const Field& rho0);

State make_initial_data(const ICRecipe& recipe, const Grid& g, double alpha);

} // namespace model
} // namespace feas
