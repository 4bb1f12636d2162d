#pragma once

#include <vector>

namespace feas {

/// One time sample of every tracked scalar. The lp_dev and gronwall columns
/// follow the p-list / q-list of the run configuration; a gronwall entry of
/// -1 marks an inapplicable envelope (decay rate X <= 0).
struct DiagnosticsRecord {
    double t = 0.0;
    double rho_min = 0.0;
    double rho_max = 0.0;
    double amplitude = 0.0;
    double q_inf = 0.0;
    double e_inf = 0.0;
    double grad_u_inf = 0.0;
    double grad_rho_inf = 0.0;
    double energy_rho = 0.0;
    double energy_kin = 0.0;
    double diss_rho = 0.0;
    double diss_u = 0.0;
    double env_lower = 0.0;
    double env_upper = 0.0;
    std::vector<double> lp_dev;
    std::vector<double> gronwall;
};

} // namespace feas
