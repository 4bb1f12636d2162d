#pragma once

#include <functional>
#include <string>
#include <vector>

#include "feas/model.hpp"
#include "feas/records.hpp"

namespace feas {

struct SchemeSpec {
    enum class Method { ssp_rk3, rk4 };
    Method method = Method::ssp_rk3;
    double cfl_safety = 0.5;
    double dt_max = 1e-2;
    double t_end = 1.0;
    int record_every = 1;
};

/// Recorded run: snapshots at the recording cadence (first entry is the
/// initial state) plus the diagnostics series filled in afterwards.
struct Trajectory {
    std::vector<State> snapshots;
    std::vector<DiagnosticsRecord> records;
    double alpha = 1.0;
    bool blew_up = false;
    double blowup_time = 0.0;
    std::string blowup_reason;
};

namespace timestepper {

/// dt = safety * min(dx1 / |u|_inf, 1 / (max rho * kmax^alpha)).
double cfl_dt(const State& s, double alpha, double safety);

/// One explicit stage combination (SSP-RK3 by default). Throws BlowUpError
/// when any stage produces a non-finite value.
State step(const State& s, double dt, double alpha, const SchemeSpec& scheme);

using Observer = std::function<void(const State&)>;

/// Adaptive-dt integration to t_end (or blow-up, returning the partial
/// trajectory). Observers run on every recorded snapshot.
Trajectory integrate(const State& s0, double alpha, const SchemeSpec& scheme,
                     const std::vector<Observer>& observers = {});

} // namespace timestepper
} // namespace feas
