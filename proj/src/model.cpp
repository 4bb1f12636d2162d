#include "feas/model.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "feas/errors.hpp"
#include "feas/kernel.hpp"
#include "feas/snapshot.hpp"
#include "feas/spectral.hpp"

namespace feas::model {

namespace {

void require_no_vacuum(const Field& rho) {
    const double mn = rho.min();
    if (!(mn > 0.0)) {
        std::ostringstream os;
        os << "vacuum state: min rho = " << mn;
        throw StateError(os.str());
    }
}

Field dealiased_product(const Field& a, const Field& b) {
    return spectral::dealias(multiply(a, b));
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Random trig polynomial with unit sup-norm; every drawn mode has k1 != 0 so
// the same generator serves the null-entropy recipe.
Field unit_trig_polynomial(const Grid& g, std::mt19937_64& rng, int n_modes) {
    std::vector<double> v(static_cast<std::size_t>(g.total()), 0.0);
    for (int j = 0; j < n_modes; ++j) {
        const int k1 = 1 + static_cast<int>(uniform01(rng) * 3.0);
        const int k2 = g.ndims() == 2 ? static_cast<int>(uniform01(rng) * 7.0) - 3 : 0;
        const double amp = 2.0 * uniform01(rng) - 1.0;
        const double phase = two_pi * uniform01(rng);
        if (g.ndims() == 1) {
            for (int i = 0; i < g.size(0); ++i)
                v[static_cast<std::size_t>(i)] += amp * std::cos(k1 * g.coord(0, i) + phase);
        } else {
            for (int i1 = 0; i1 < g.size(0); ++i1)
                for (int i2 = 0; i2 < g.size(1); ++i2)
                    v[static_cast<std::size_t>(i1) * g.size(1) + i2] +=
                        amp * std::cos(k1 * g.coord(0, i1) + k2 * g.coord(1, i2) + phase);
        }
    }
    Field f = Field::from_values(g, std::move(v));
    const double sup = f.linf();
    return sup > 0.0 ? (1.0 / sup) * f : f;
}

} // namespace

double mass(const State& s) { return s.rho.integral(); }
double momentum(const State& s) { return inner(s.rho, s.u); }
double mean_velocity(const State& s) { return momentum(s) / mass(s); }

Field alignment_term(const Field& u, const Field& rho, double alpha, AlignmentPath path,
                     bool* accuracy_warning) {
    if (accuracy_warning) *accuracy_warning = false;
    if (path == AlignmentPath::kernel)
        return kernel::quadrature_alignment(u, rho, alpha, accuracy_warning);
    const Field m = dealiased_product(rho, u);
    const Field lam_rho_u = dealiased_product(spectral::frac_laplacian(rho, alpha), u);
    return lam_rho_u - spectral::frac_laplacian(m, alpha);
}

Rhs rhs(const State& s, double alpha) {
    require_no_vacuum(s.rho);
    const Field m = dealiased_product(s.rho, s.u);
    Field drho = -1.0 * spectral::partial_x1(m);
    const Field u2 = dealiased_product(s.u, s.u);
    const Field du = lincomb(-0.5, spectral::partial_x1(u2), 1.0,
                             alignment_term(s.u, s.rho, alpha, AlignmentPath::spectral));
    return {std::move(drho), du};
}

Entropy entropy_of(const State& s, double alpha) {
    require_no_vacuum(s.rho);
    Field e = spectral::partial_x1(s.u) - spectral::frac_laplacian(s.rho, alpha);
    Field q = divide(e, s.rho);
    return {std::move(e), std::move(q)};
}

double check_compatibility(const Field& rho, const Field& u, const Field& e, double alpha) {
    const Grid& g = rho.grid();
    std::vector<std::array<int, 2>> modes;
    if (g.ndims() == 1) {
        modes = {{0, 0}, {1, 0}, {2, 0}, {3, 0}};
    } else {
        modes = {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 0}, {0, 2}};
    }
    double worst = 0.0;
    for (const auto& k : modes) {
        const double kmag = std::hypot(k[0], k[1]);
        const double mult = kmag == 0.0 ? 0.0 : std::pow(kmag, alpha);
        for (int trig = 0; trig < (kmag == 0.0 ? 1 : 2); ++trig) {
            auto phase = [&](double x1, double x2) { return k[0] * x1 + k[1] * x2; };
            const Field phi = Field::sample(g, [&](double x1, double x2) {
                return trig == 0 ? std::cos(phase(x1, x2)) : std::sin(phase(x1, x2));
            });
            const Field dphi = Field::sample(g, [&](double x1, double x2) {
                return trig == 0 ? -k[0] * std::sin(phase(x1, x2)) : k[0] * std::cos(phase(x1, x2));
            });
            const double r = inner(e, phi) + inner(u, dphi) + mult * inner(rho, phi);
            worst = std::max(worst, std::abs(r));
        }
    }
    const double scale = 1.0 + rho.lp_norm(2.0) + u.lp_norm(2.0) + e.lp_norm(2.0);
    return worst / scale;
}

Field null_entropy_velocity(const Field& rho0, double ubar, double alpha) {
    require_no_vacuum(rho0);
    const Grid& g = rho0.grid();
    const int nyq1 = g.size(0) / 2;
    const double tol = 1e-13 * std::max(1.0, rho0.linf());
    std::vector<std::complex<double>> c(rho0.spectral());
    std::ostringstream offending;
    bool bad = false;
    for (long i = 0; i < rho0.spec_size(); ++i) {
        const Field::Mode m = rho0.mode(i);
        auto& coeff = c[static_cast<std::size_t>(i)];
        if (m.k1 == 0 && m.k2 == 0) {
            coeff = ubar;
            continue;
        }
        const bool obstructed = m.k1 == 0 || std::abs(m.k1) == nyq1;
        if (obstructed) {
            if (std::abs(coeff) > tol) {
                bad = true;
                offending << " (" << m.k1 << "," << m.k2 << ")";
            }
            coeff = 0.0;
            continue;
        }
        coeff *= std::pow(m.kmag(), alpha) / std::complex<double>(0.0, m.k1);
    }
    if (bad)
        throw SolvabilityError("d1 u0 = Lambda^a rho0 has no periodic solution; offending modes:" +
                               offending.str());
    return Field::from_spectral(g, std::move(c));
}

Field project_to_solvable(const Field& rho0) {
    const Grid& g = rho0.grid();
    const int nyq1 = g.size(0) / 2;
    std::vector<std::complex<double>> c(rho0.spectral());
    for (long i = 0; i < rho0.spec_size(); ++i) {
        const Field::Mode m = rho0.mode(i);
        if (m.k1 == 0 && m.k2 == 0) continue;
        if (m.k1 == 0 || std::abs(m.k1) == nyq1) c[static_cast<std::size_t>(i)] = 0.0;
    }
    return Field::from_spectral(g, std::move(c));
}

State make_initial_data(const ICRecipe& recipe, const Grid& g, double alpha) {
    if (recipe.kind == ICRecipe::Kind::snapshot) {
        State s = io::read_snapshot(recipe.snapshot_path);
        if (!(s.rho.grid() == g)) throw ParameterError("snapshot grid does not match config grid");
        require_no_vacuum(s.rho);
        return s;
    }
    if (!(recipe.rho_floor > 0.0)) throw ParameterError("rho_floor must be positive");
    if (recipe.amplitude < 0.0) throw ParameterError("amplitude must be nonnegative");
    if (recipe.n_modes < 1) throw ParameterError("n_modes must be >= 1");

    std::mt19937_64 rng(recipe.seed);
    const Field prho = unit_trig_polynomial(g, rng, recipe.n_modes);
    const Field rho = shifted(recipe.amplitude * prho, recipe.rho_floor + recipe.amplitude);

    Field u = Field::zeros(g);
    if (recipe.kind == ICRecipe::Kind::trig_polynomial) {
        const Field pu = unit_trig_polynomial(g, rng, recipe.n_modes);
        u = shifted(recipe.amplitude * pu, recipe.ubar);
    } else {
        u = null_entropy_velocity(rho, recipe.ubar, alpha);
        if (recipe.e0_amplitude != 0.0) {
            const Field shear =
                Field::sample(g, [](double x1, double) { return std::sin(x1); });
            u = lincomb(1.0, u, recipe.e0_amplitude, shear);
        }
    }

    const double mn = rho.min();
    if (!(mn > 0.0)) {
        std::ostringstream os;
        os << "initial-condition recipe produced vacuum: min rho = " << mn;
        throw StateError(os.str());
    }
    return {rho, u, 0.0};
}

} // namespace feas::model
