#include "feas/timestepper.hpp"

#include <cmath>
#include <limits>

#include "feas/errors.hpp"

namespace feas::timestepper {

namespace {

Field lincomb3(double a, const Field& x, double b, const Field& y, double c, const Field& z) {
    std::vector<double> v(x.values().size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = a * x.values()[i] + b * y.values()[i] + c * z.values()[i];
    return Field::from_values(x.grid(), std::move(v));
}

void check_finite(const Field& rho, const Field& u, double t) {
    if (!rho.all_finite() || !u.all_finite())
        throw BlowUpError("non-finite value in integration stage at t = " + std::to_string(t), t);
}

} // namespace

double cfl_dt(const State& s, double alpha, double safety) {
    if (!(s.rho.min() > 0.0)) throw StateError("cfl_dt on vacuum state");
    const double umax = s.u.linf();
    const double advect = umax > 0.0 ? s.rho.grid().dx(0) / umax
                                     : std::numeric_limits<double>::infinity();
    const double diffuse = 1.0 / (s.rho.max() * std::pow(s.rho.grid().kmax(), alpha));
    return safety * std::min(advect, diffuse);
}

State step(const State& s, double dt, double alpha, const SchemeSpec& scheme) {
    const double t1 = s.time + dt;
    if (scheme.method == SchemeSpec::Method::ssp_rk3) {
        const model::Rhs k1 = model::rhs(s, alpha);
        Field r1 = lincomb(1.0, s.rho, dt, k1.drho_dt);
        Field u1 = lincomb(1.0, s.u, dt, k1.du_dt);
        check_finite(r1, u1, t1);
        const model::Rhs k2 = model::rhs({r1, u1, s.time + dt}, alpha);
        Field r2 = lincomb3(0.75, s.rho, 0.25, r1, 0.25 * dt, k2.drho_dt);
        Field u2 = lincomb3(0.75, s.u, 0.25, u1, 0.25 * dt, k2.du_dt);
        check_finite(r2, u2, t1);
        const model::Rhs k3 = model::rhs({r2, u2, s.time + 0.5 * dt}, alpha);
        Field r3 = lincomb3(1.0 / 3.0, s.rho, 2.0 / 3.0, r2, 2.0 / 3.0 * dt, k3.drho_dt);
        Field u3 = lincomb3(1.0 / 3.0, s.u, 2.0 / 3.0, u2, 2.0 / 3.0 * dt, k3.du_dt);
        check_finite(r3, u3, t1);
        return {std::move(r3), std::move(u3), t1};
    }

    // Classic RK4.
    const model::Rhs k1 = model::rhs(s, alpha);
    State s2{lincomb(1.0, s.rho, 0.5 * dt, k1.drho_dt), lincomb(1.0, s.u, 0.5 * dt, k1.du_dt),
             s.time + 0.5 * dt};
    check_finite(s2.rho, s2.u, t1);
    const model::Rhs k2 = model::rhs(s2, alpha);
    State s3{lincomb(1.0, s.rho, 0.5 * dt, k2.drho_dt), lincomb(1.0, s.u, 0.5 * dt, k2.du_dt),
             s.time + 0.5 * dt};
    check_finite(s3.rho, s3.u, t1);
    const model::Rhs k3 = model::rhs(s3, alpha);
    State s4{lincomb(1.0, s.rho, dt, k3.drho_dt), lincomb(1.0, s.u, dt, k3.du_dt), t1};
    check_finite(s4.rho, s4.u, t1);
    const model::Rhs k4 = model::rhs(s4, alpha);
    Field dr = lincomb(1.0, lincomb(1.0, k1.drho_dt, 2.0, k2.drho_dt), 1.0,
                       lincomb(2.0, k3.drho_dt, 1.0, k4.drho_dt));
    Field du = lincomb(1.0, lincomb(1.0, k1.du_dt, 2.0, k2.du_dt), 1.0,
                       lincomb(2.0, k3.du_dt, 1.0, k4.du_dt));
    Field r = lincomb(1.0, s.rho, dt / 6.0, dr);
    Field u = lincomb(1.0, s.u, dt / 6.0, du);
    check_finite(r, u, t1);
    return {std::move(r), std::move(u), t1};
}

Trajectory integrate(const State& s0, double alpha, const SchemeSpec& scheme,
                     const std::vector<Observer>& observers) {
    if (!(scheme.cfl_safety > 0.0 && scheme.cfl_safety <= 1.0))
        throw ParameterError("cfl_safety must lie in (0,1]");
    if (scheme.t_end < 0.0) throw ParameterError("t_end must be nonnegative");
    if (scheme.record_every < 1) throw ParameterError("record_every must be >= 1");
    if (!(scheme.dt_max > 0.0)) throw ParameterError("dt_max must be positive");

    Trajectory traj;
    traj.alpha = alpha;
    traj.snapshots.push_back(s0);
    for (const Observer& o : observers) o(s0);

    State s = s0;
    long steps = 0;
    const double t_eps = 1e-12 * std::max(1.0, scheme.t_end);
    while (s.time < scheme.t_end - t_eps) {
        try {
            double dt = std::min(cfl_dt(s, alpha, scheme.cfl_safety), scheme.dt_max);
            dt = std::min(dt, scheme.t_end - s.time);
            if (!(dt > 0.0)) break;
            s = step(s, dt, alpha, scheme);
        } catch (const BlowUpError& e) {
            traj.blew_up = true;
            traj.blowup_time = e.time;
            traj.blowup_reason = e.what();
            break;
        } catch (const StateError& e) {
            traj.blew_up = true;
            traj.blowup_time = s.time;
            traj.blowup_reason = e.what();
            break;
        }
        ++steps;
        const bool at_end = s.time >= scheme.t_end - t_eps;
        if (steps % scheme.record_every == 0 || at_end) {
            traj.snapshots.push_back(s);
            for (const Observer& o : observers) o(s);
        }
    }
    return traj;
}

} // namespace feas::timestepper
