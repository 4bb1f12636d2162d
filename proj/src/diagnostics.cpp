#include "feas/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "feas/errors.hpp"
#include "feas/ineq.hpp"
#include "feas/kernel.hpp"
#include "feas/spectral.hpp"

namespace feas::diag {

namespace {

constexpr double log_floor = 1e-14;

// The envelope theory covers alpha in (0,2); keep the alpha = 2 edge alive
// by evaluating the kernel constants just inside the range.
double kernel_safe_alpha(double alpha) { return std::min(alpha, 2.0 - 1e-9); }

double logistic(double b, double x0, double rate, double t) {
    // Solution of X' = A X (B - X) with A B = rate, X(0) = x0.
    return b * x0 / (x0 + (b - x0) * std::exp(-rate * t));
}

struct LinearFit {
    double slope = 0.0;
    double r2 = 1.0;
    bool at_floor = false;
};

LinearFit fit_log_tail(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t n = t.size();
    const std::size_t lo = n / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    bool any_above_floor = false;
    std::vector<double> xs, zs;
    for (std::size_t i = lo; i < n; ++i) {
        const double yv = std::max(y[i], log_floor);
        if (y[i] > log_floor) any_above_floor = true;
        const double z = std::log(yv);
        xs.push_back(t[i]);
        zs.push_back(z);
        sx += t[i];
        sy += z;
        sxx += t[i] * t[i];
        sxy += t[i] * z;
        ++m;
    }
    LinearFit fit;
    if (!any_above_floor) {
        fit.slope = -std::numeric_limits<double>::infinity();
        fit.at_floor = true;
        return fit;
    }
    const double denom = m * sxx - sx * sx;
    fit.slope = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
    const double zbar = sy / m;
    const double icpt = zbar - fit.slope * sx / m;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double pred = icpt + fit.slope * xs[i];
        ss_res += (zs[i] - pred) * (zs[i] - pred);
        ss_tot += (zs[i] - zbar) * (zs[i] - zbar);
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

} // namespace

double amplitude(const Field& u) { return u.max() - u.min(); }

double ball_volume(int n) {
    if (n == 1) return 2.0;
    if (n == 2) return M_PI;
    throw ParameterError("ball_volume supports n in {1,2}");
}

namespace {

EnvelopeConstants build_envelope_constants(double mass, double rho0_min, double rho0_max,
                                           double q0_inf, int n, double alpha) {
    if (q0_inf < 0.0) throw ParameterError("q0_inf must be nonnegative");
    EnvelopeConstants ec;
    ec.q0_inf = q0_inf;
    ec.mass = mass;
    ec.rho0_min = rho0_min;
    ec.rho0_max = rho0_max;
    const double ka = kernel_safe_alpha(alpha);
    const double c = kernel::multiplier_constant(n, ka);
    // Ball radius of the upper-bound comparison argument; capping at pi only
    // loosens the bound.
    const double r = std::min(M_PI, std::pow(c * ball_volume(n) / (q0_inf + 1.0), 1.0 / ka));
    ec.c1 = c * mass * std::pow(r, -(n + ka));
    const double kinf = kernel::normalized_inf(n, ka);
    ec.c2 = kinf * mass / (q0_inf + kinf * std::pow(two_pi, n));
    ec.c3 = kinf * mass;
    return ec;
}

} // namespace

EnvelopeConstants EnvelopeConstants::from_initial(const State& s0, double alpha) {
    const Entropy ent = model::entropy_of(s0, alpha);
    return build_envelope_constants(model::mass(s0), s0.rho.min(), s0.rho.max(), ent.q.linf(),
                                    s0.rho.grid().ndims(), alpha);
}

std::pair<double, double> EnvelopeConstants::at(double t) const {
    const double upper = logistic(c1, rho0_max, c1, t);
    const double lower = logistic(c2, rho0_min, c3, t);
    return {lower, upper};
}

std::pair<double, double> logistic_envelopes(const Field& rho0, double q0_inf, double alpha,
                                             double t) {
    const EnvelopeConstants ec =
        build_envelope_constants(rho0.integral(), rho0.min(), rho0.max(), q0_inf,
                                 rho0.grid().ndims(), alpha);
    return ec.at(t);
}

EnvelopeReport check_envelopes(const Trajectory& traj) {
    if (traj.snapshots.empty()) throw InsufficientDataError("empty trajectory");
    const EnvelopeConstants ec = EnvelopeConstants::from_initial(traj.snapshots.front(), traj.alpha);
    EnvelopeReport rep;
    rep.slack = 1e-3 * ec.rho0_max;
    for (const State& s : traj.snapshots) {
        const auto [lower, upper] = ec.at(s.time);
        const double excess =
            std::max(lower - rep.slack - s.rho.min(), s.rho.max() - upper - rep.slack);
        if (excess > rep.worst_excess) rep.worst_excess = excess;
        if (excess > 0.0 && rep.contained) {
            rep.contained = false;
            rep.first_violation_time = s.time;
        }
    }
    return rep;
}

EntropyReport entropy_conservation(const Trajectory& traj) {
    if (traj.snapshots.empty()) throw InsufficientDataError("empty trajectory");
    EntropyReport rep;
    double rho_lo = std::numeric_limits<double>::infinity();
    double rho_hi = 0.0;
    double e0_inf = 0.0, e_worst = 0.0;
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        const State& s = traj.snapshots[i];
        const Entropy ent = model::entropy_of(s, traj.alpha);
        const double qi = ent.q.linf();
        if (i == 0) {
            rep.q0_inf = qi;
            e0_inf = ent.e.linf();
        }
        rep.max_abs_drift = std::max(rep.max_abs_drift, std::abs(qi - rep.q0_inf));
        e_worst = std::max(e_worst, ent.e.linf());
        rho_lo = std::min(rho_lo, s.rho.min());
        rho_hi = std::max(rho_hi, s.rho.max());
    }
    rep.max_rel_drift = rep.q0_inf > 1e-12 ? rep.max_abs_drift / rep.q0_inf : rep.max_abs_drift;
    const double slack = 1e-6 * (1.0 + e0_inf);
    rep.uniform_entropy_ok = e_worst <= (rho_hi / rho_lo) * e0_inf + slack;
    return rep;
}

double dissipation_density(const Field& rho, double alpha) {
    // int rho D_rho = int rho^2 Lambda^a rho by self-adjointness; the grid
    // pairing below is the alias-free way to evaluate it.
    return inner(multiply(rho, rho), spectral::frac_laplacian(rho, alpha));
}

double dissipation_velocity(const Field& rho, const Field& u, double alpha) {
    return -2.0 * inner(multiply(rho, u), model::alignment_term(u, rho, alpha));
}

EnergyResiduals energy_residuals(const Trajectory& traj) {
    if (traj.snapshots.empty()) throw InsufficientDataError("empty trajectory");
    const std::size_t n = traj.snapshots.size();
    std::vector<double> e_rho(n), e_kin(n), d_rho(n), d_u(n), s_e(n), t(n);
    for (std::size_t i = 0; i < n; ++i) {
        const State& s = traj.snapshots[i];
        t[i] = s.time;
        e_rho[i] = inner(s.rho, s.rho);
        e_kin[i] = 0.5 * inner(multiply(s.rho, s.u), s.u);
        d_rho[i] = dissipation_density(s.rho, traj.alpha);
        d_u[i] = dissipation_velocity(s.rho, s.u, traj.alpha);
        const Entropy ent = model::entropy_of(s, traj.alpha);
        s_e[i] = inner(multiply(s.rho, s.rho), ent.e);
    }
    EnergyResiduals res;
    res.t = t;
    res.res_rho.resize(n);
    res.res_kinetic.resize(n);
    double acc_rho = 0.0, acc_u = 0.0;
    res.res_rho[0] = 0.0;
    res.res_kinetic[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double dt = t[i] - t[i - 1];
        acc_rho += 0.5 * dt * ((d_rho[i] + s_e[i]) + (d_rho[i - 1] + s_e[i - 1]));
        // The symmetrized double integral counts each pair twice; the balance
        // law carries half of it.
        acc_u += 0.25 * dt * (d_u[i] + d_u[i - 1]);
        res.res_rho[i] = e_rho[i] - e_rho[0] + acc_rho;
        res.res_kinetic[i] = e_kin[i] - e_kin[0] + acc_u;
    }
    return res;
}

double lp_deviation(const Field& rho, double p) {
    return shifted(rho, -rho.mean()).lp_norm(p);
}

double GronwallParams::X() const {
    if (q < 1) throw ParameterError("Gronwall envelope requires q >= 1");
    const double kinf = kernel::normalized_inf(ndims, kernel_safe_alpha(alpha));
    const double vol = std::pow(two_pi, ndims);
    const double dissipative = C_q * rho_minus * vol * kinf;
    const double entropic =
        (1.0 + m) * ((2.0 * q - 1.0) / (2.0 * q)) * (rho_plus / rho_minus) * e0_inf;
    return dissipative - entropic;
}

double GronwallParams::Y() const {
    if (q < 1) throw ParameterError("Gronwall envelope requires q >= 1");
    return (m / (2.0 * q)) * std::pow(two_pi, ndims) * (rho_plus / rho_minus) * e0_inf;
}

std::optional<double> gronwall_envelope(const GronwallParams& p, double r0_2q, double t) {
    const double x = p.X();
    if (!(x > 0.0)) return std::nullopt;
    const double decay = std::exp(-2.0 * p.q * x * t);
    return r0_2q * decay + (p.Y() / x) * (1.0 - decay);
}

Field moving_frame_density(const State& s, double ubar) {
    const Grid& g = s.rho.grid();
    const double a = ubar * s.time;
    const int nyq = g.size(0) / 2;
    std::vector<std::complex<double>> c(s.rho.spectral());
    for (long i = 0; i < s.rho.spec_size(); ++i) {
        const Field::Mode m = s.rho.mode(i);
        if (std::abs(m.k1) == nyq)
            c[static_cast<std::size_t>(i)] *= std::cos(m.k1 * a);
        else
            c[static_cast<std::size_t>(i)] *= std::exp(std::complex<double>(0.0, m.k1 * a));
    }
    return Field::from_spectral(g, std::move(c));
}

FlockMetrics flock_metrics(const Trajectory& traj) {
    if (traj.snapshots.size() < 20)
        throw InsufficientDataError("flock_metrics needs at least 20 records");
    const double ubar = model::mean_velocity(traj.snapshots.front());
    std::vector<double> t, udev, gradu;
    std::vector<Field> shifted_rho;
    for (const State& s : traj.snapshots) {
        t.push_back(s.time);
        udev.push_back(shifted(s.u, -ubar).linf());
        gradu.push_back(spectral::grad_linf(s.u));
        shifted_rho.push_back(moving_frame_density(s, ubar));
    }
    const Field& rho_inf = shifted_rho.back();
    std::vector<double> residual;
    for (const Field& f : shifted_rho) residual.push_back((f - rho_inf).linf());

    const LinearFit fa = fit_log_tail(t, udev);
    const LinearFit fg = fit_log_tail(t, gradu);
    return {fa.slope, fa.r2, fg.slope, fg.r2, rho_inf, std::move(residual), ubar};
}

MaxPrincipleCheck nonlinear_max_principle_check(const Field& u, double B, double c) {
    const Field d = kernel::grad_dissipation(u);
    const Field g1 = spectral::partial_axis(u, 0);
    const Field g2 = u.grid().ndims() == 2 ? spectral::partial_axis(u, 1) : Field::zeros(u.grid());
    const double a = amplitude(u);
    const double a2b3 = B * B * B * a * a;

    MaxPrincipleCheck out;
    double gap_min = std::numeric_limits<double>::infinity();
    double worst_deficit = 0.0; // max of B |grad u|^2 - D
    for (std::size_t i = 0; i < d.values().size(); ++i) {
        const double grad2 = g1.values()[i] * g1.values()[i] + g2.values()[i] * g2.values()[i];
        const double deficit = B * grad2 - d.values()[i];
        worst_deficit = std::max(worst_deficit, deficit);
        gap_min = std::min(gap_min, -deficit + c * a2b3);
    }
    out.gap_min = gap_min;
    out.c_estimate = a2b3 > 0.0 ? std::max(0.0, worst_deficit) / a2b3 : 0.0;
    return out;
}

void compute_records(Trajectory& traj, const DiagnosticsConfig& cfg) {
    if (traj.snapshots.empty()) throw InsufficientDataError("empty trajectory");
    const double alpha = traj.alpha;
    const State& s0 = traj.snapshots.front();
    const EnvelopeConstants ec = EnvelopeConstants::from_initial(s0, alpha);

    traj.records.clear();
    traj.records.reserve(traj.snapshots.size());
    double rho_lo = std::numeric_limits<double>::infinity();
    double rho_hi = 0.0;
    for (const State& s : traj.snapshots) {
        DiagnosticsRecord r;
        r.t = s.time;
        r.rho_min = s.rho.min();
        r.rho_max = s.rho.max();
        rho_lo = std::min(rho_lo, r.rho_min);
        rho_hi = std::max(rho_hi, r.rho_max);
        r.amplitude = amplitude(s.u);
        const Field e = spectral::partial_x1(s.u) - spectral::frac_laplacian(s.rho, alpha);
        r.e_inf = e.linf();
        r.q_inf = divide(e, s.rho).linf();
        r.grad_u_inf = spectral::grad_linf(s.u);
        r.grad_rho_inf = spectral::grad_linf(s.rho);
        r.energy_rho = inner(s.rho, s.rho);
        r.energy_kin = 0.5 * inner(multiply(s.rho, s.u), s.u);
        r.diss_rho = dissipation_density(s.rho, alpha);
        r.diss_u = dissipation_velocity(s.rho, s.u, alpha);
        const auto [lower, upper] = ec.at(s.time);
        r.env_lower = lower;
        r.env_upper = upper;
        for (double p : cfg.p_list) r.lp_dev.push_back(lp_deviation(s.rho, p));
        traj.records.push_back(std::move(r));
    }

    // Gronwall columns need the run-wide density window and certified C(q).
    const double m = s0.rho.mean();
    const Field e0 = spectral::partial_x1(s0.u) - spectral::frac_laplacian(s0.rho, alpha);
    const double e0_inf = e0.linf();
    for (int q : cfg.q_list) {
        // A vacuum-touching (blown-up) run has no Gronwall theory; mark the
        // column inapplicable instead of failing the certification.
        if (!(rho_lo > 0.0)) {
            for (DiagnosticsRecord& r : traj.records) r.gronwall.push_back(-1.0);
            continue;
        }
        double cq;
        if (auto it = cfg.C_q.find(q); it != cfg.C_q.end()) {
            cq = it->second;
        } else {
            const auto sweep = ineq::BoxSweep::standard(q, rho_lo, rho_hi, m, 501);
            cq = ineq::certify_fq_min(sweep).C_q;
        }
        GronwallParams gp{q, cq, e0_inf, rho_lo, rho_hi, m, s0.rho.grid().ndims(), alpha};
        const double r0 = std::pow(lp_deviation(s0.rho, 2.0 * q), 2.0 * q);
        for (DiagnosticsRecord& r : traj.records) {
            const auto env = gronwall_envelope(gp, r0, r.t);
            r.gronwall.push_back(env ? *env : -1.0);
        }
    }
}

} // namespace feas::diag
