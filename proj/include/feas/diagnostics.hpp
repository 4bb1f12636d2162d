#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "feas/timestepper.hpp"

namespace feas::diag {

/// max u - min u over the torus; non-increasing along solutions.
double amplitude(const Field& u);

/// Constants of the logistic comparison bounds for the density extrema.
/// The kernel normalization c_{n,alpha} is carried through, so these apply
/// to the |k|^alpha multiplier convention used by the solver.
struct EnvelopeConstants {
    double c1 = 0.0; // upper asymptote and rate
    double c2 = 0.0; // lower asymptote
    double c3 = 0.0; // lower rate
    double mass = 0.0;
    double q0_inf = 0.0;
    double rho0_min = 0.0;
    double rho0_max = 0.0;

    static EnvelopeConstants from_initial(const State& s0, double alpha);
    std::pair<double, double> at(double t) const; // (lower, upper)
};

/// Unit-ball volume C(n) with V_n(r) = C(n) r^n.
double ball_volume(int n);

/// Closed-form logistic envelopes evaluated at time t for the given initial
/// density and conserved |q0|_inf.
std::pair<double, double> logistic_envelopes(const Field& rho0, double q0_inf, double alpha,
                                             double t);

struct EnvelopeReport {
    bool contained = true;
    double first_violation_time = 0.0;
    double worst_excess = 0.0; // max signed overshoot beyond the slack
    double slack = 0.0;
};

/// Containment of rho_min / rho_max inside the logistic envelopes with slack
/// 1e-3 * rho0_max at every record.
EnvelopeReport check_envelopes(const Trajectory& traj);

struct EntropyReport {
    double q0_inf = 0.0;
    double max_abs_drift = 0.0; // max_t | |q(t)|_inf - |q0|_inf |
    double max_rel_drift = 0.0; // relative to |q0|_inf when it is nonzero
    bool uniform_entropy_ok = true; // |e(t)|_inf <= (rho+/rho-) |e0|_inf
};

EntropyReport entropy_conservation(const Trajectory& traj);

/// int rho D_rho dx with D_rho = 2 rho Lambda^a rho - Lambda^a(rho^2);
/// equals the symmetrized double integral (1/2) iint (rho+rho')(drho)^2 k.
double dissipation_density(const Field& rho, double alpha);

/// -2 int rho u C_alpha(u, rho) dx = iint rho rho' (u-u')^2 k; nonnegative.
double dissipation_velocity(const Field& rho, const Field& u, double alpha);

struct EnergyResiduals {
    std::vector<double> t;
    std::vector<double> res_rho;     // int rho^2 balance defect
    std::vector<double> res_kinetic; // (1/2) int rho u^2 balance defect
};

/// Trapezoid-in-time residuals of the two energy balance laws; both converge
/// to zero under record-cadence refinement for smooth runs.
EnergyResiduals energy_residuals(const Trajectory& traj);

/// |rho - m|_{L^p} with m the uniform value (2 pi)^{-n} M.
double lp_deviation(const Field& rho, double p);

/// Parameters of the L^2q Gronwall envelope: decay rate X, source Y.
struct GronwallParams {
    int q = 1;
    double C_q = 1.0; // certified box minimum of f_q divided by rho_minus
    double e0_inf = 0.0;
    double rho_minus = 0.0;
    double rho_plus = 0.0;
    double m = 0.0;
    int ndims = 1;
    double alpha = 1.0;

    double X() const;
    double Y() const;
};

/// |r0|_{2q}^{2q} e^{-2qXt} + (Y/X)(1 - e^{-2qXt}); empty when X <= 0
/// (the smallness condition fails and no envelope is claimed).
std::optional<double> gronwall_envelope(const GronwallParams& p, double r0_2q, double t);

struct FlockMetrics {
    double align_rate = 0.0; // slope of log |u - ubar|_inf on the tail half
    double align_r2 = 0.0;
    double grad_rate = 0.0;  // slope of log |grad u|_inf
    double grad_r2 = 0.0;
    Field rho_infty;         // final moving-frame density snapshot
    std::vector<double> moving_frame_residual; // |rho~(t) - rho_inf|_inf
    double ubar = 0.0;
};

/// Exponential-decay fits plus the moving-frame density limit. The final
/// moving-frame snapshot serves as rho_inf; requires >= 20 records.
FlockMetrics flock_metrics(const Trajectory& traj);

/// Last moving-frame density snapshot rho(x1 + t ubar, x-, t).
Field moving_frame_density(const State& s, double ubar);

struct MaxPrincipleCheck {
    double gap_min = 0.0;    // min_x D(grad u) - B |grad u|^2 + c B^3 A^2
    double c_estimate = 0.0; // smallest c making the gap nonnegative
};

/// Sampled check of D(grad u)(x) >= B |grad u(x)|^2 - c B^3 A(t)^2 with the
/// alpha = 1 kernel.
MaxPrincipleCheck nonlinear_max_principle_check(const Field& u, double B, double c = 0.0);

struct DiagnosticsConfig {
    std::vector<double> p_list{2.0, 4.0};
    std::vector<int> q_list{1, 2};
    /// Certified C(q); missing entries are certified on the run's own box.
    std::map<int, double> C_q;
};

/// Fill traj.records from the snapshots.
void compute_records(Trajectory& traj, const DiagnosticsConfig& cfg);

} // namespace feas::diag
