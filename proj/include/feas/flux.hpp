#pragma once

#include <vector>

#include "feas/spectral.hpp"
#include "feas/timestepper.hpp"

namespace feas::flux {

struct Filtered {
    double value = 0.0;
    bool vacuum = false; // filtered density not positive everywhere
};

/// E_Q = (1/2) int (S_Q^{x1}(rho u))^2 / S_Q^{x1}(rho) dx.
Filtered filtered_energy(const State& s, int Q);

/// Pi_Q = int (S_Q^{x1}(rho u^2) - U S_Q^{x1}(rho u)) d1 U dx with
/// U = S_Q^{x1}(rho u) / S_Q^{x1}(rho).
Filtered flux_PiQ(const State& s, int Q);

/// eps_Q(t_i) = -int_0^{t_i} int S_Q^{x1}(rho C_alpha(rho,u)) U dx ds by the
/// trapezoid rule over the record cadence. At Q past the active spectrum the
/// series matches half the accumulated velocity dissipation.
std::vector<double> alignment_transfer_epsQ(const Trajectory& traj, int Q);

struct BudgetSeries {
    int Q = 0;
    std::vector<double> t;
    std::vector<double> E_Q;
    std::vector<double> flux_int; // int_0^t Pi_Q ds
    std::vector<double> eps_Q;
    std::vector<double> residual; // E_Q(t) - E_Q(0) - flux_int + eps_Q
    std::vector<bool> vacuum;     // flagged records, excluded from residual
};

BudgetSeries budget_closure(const Trajectory& traj, int Q);

using spectral::OnsagerIndicator;
using spectral::onsager_indicator;

} // namespace feas::flux
