#include "feas/flux.hpp"

#include <cmath>

#include "feas/errors.hpp"

namespace feas::flux {

namespace {

using spectral::LpMode;

struct FilterPieces {
    Field s_rho;
    Field s_m;
    bool vacuum;
};

FilterPieces filter_state(const State& s, int Q) {
    Field s_rho = spectral::lp_lowpass(s.rho, Q, LpMode::anisotropic_x1);
    Field s_m = spectral::lp_lowpass(multiply(s.rho, s.u), Q, LpMode::anisotropic_x1);
    const bool vacuum = !(s_rho.min() > 0.0);
    return {std::move(s_rho), std::move(s_m), vacuum};
}

double eps_integrand(const State& s, int Q, double alpha, bool* vacuum) {
    FilterPieces f = filter_state(s, Q);
    if (vacuum) *vacuum = f.vacuum;
    if (f.vacuum) return 0.0;
    const Field U = divide(f.s_m, f.s_rho);
    const Field rc = multiply(s.rho, model::alignment_term(s.u, s.rho, alpha));
    return -inner(spectral::lp_lowpass(rc, Q, LpMode::anisotropic_x1), U);
}

} // namespace

Filtered filtered_energy(const State& s, int Q) {
    FilterPieces f = filter_state(s, Q);
    if (f.vacuum) return {0.0, true};
    return {0.5 * inner(f.s_m, divide(f.s_m, f.s_rho)), false};
}

Filtered flux_PiQ(const State& s, int Q) {
    FilterPieces f = filter_state(s, Q);
    if (f.vacuum) return {0.0, true};
    const Field U = divide(f.s_m, f.s_rho);
    const Field s_ruu =
        spectral::lp_lowpass(multiply(multiply(s.rho, s.u), s.u), Q, LpMode::anisotropic_x1);
    const Field d1U = spectral::partial_x1(U);
    return {inner(s_ruu - multiply(U, f.s_m), d1U), false};
}

std::vector<double> alignment_transfer_epsQ(const Trajectory& traj, int Q) {
    const std::size_t n = traj.snapshots.size();
    std::vector<double> out(n, 0.0);
    if (n == 0) return out;
    double prev = eps_integrand(traj.snapshots[0], Q, traj.alpha, nullptr);
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double cur = eps_integrand(traj.snapshots[i], Q, traj.alpha, nullptr);
        const double dt = traj.snapshots[i].time - traj.snapshots[i - 1].time;
        acc += 0.5 * dt * (prev + cur);
        out[i] = acc;
        prev = cur;
    }
    return out;
}

BudgetSeries budget_closure(const Trajectory& traj, int Q) {
    if (traj.snapshots.empty()) throw InsufficientDataError("empty trajectory");
    BudgetSeries b;
    b.Q = Q;
    const std::size_t n = traj.snapshots.size();
    std::vector<double> pi(n, 0.0), epsd(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const State& s = traj.snapshots[i];
        b.t.push_back(s.time);
        const Filtered e = filtered_energy(s, Q);
        const Filtered p = flux_PiQ(s, Q);
        bool vac = false;
        epsd[i] = eps_integrand(s, Q, traj.alpha, &vac);
        b.vacuum.push_back(e.vacuum || p.vacuum || vac);
        b.E_Q.push_back(e.value);
        pi[i] = p.value;
    }
    b.flux_int.assign(n, 0.0);
    b.eps_Q.assign(n, 0.0);
    b.residual.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        const double dt = b.t[i] - b.t[i - 1];
        b.flux_int[i] = b.flux_int[i - 1] + 0.5 * dt * (pi[i] + pi[i - 1]);
        b.eps_Q[i] = b.eps_Q[i - 1] + 0.5 * dt * (epsd[i] + epsd[i - 1]);
        b.residual[i] =
            b.vacuum[i] ? 0.0 : b.E_Q[i] - b.E_Q[0] - b.flux_int[i] + b.eps_Q[i];
    }
    return b;
}

} // namespace feas::flux
