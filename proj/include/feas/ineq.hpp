#pragma once

#include <vector>

#include "feas/field.hpp"

namespace feas::ineq {

/// f_q(X,Y) = ((2q-1)/2q)(X^2q - Y^2q)/(X-Y)^{2q-1}
///          + m (X^{2q-1} - Y^{2q-1})/(X-Y)^{2q-1},
/// evaluated through divided differences so only the explicit
/// (X-Y)^{2q-2} pole remains. On the diagonal the value is the limit:
/// (X+Y)/2 + m for q = 1, m 2^{2-2q} at the origin, +infinity elsewhere.
double f_q_value(double X, double Y, int q, double m);

struct BoxSweep {
    double x_lo = 0.0;
    double x_hi = 0.0;
    int resolution = 101; // points per axis, >= 101
    int q = 1;
    double m = 1.0;
    double rho_minus = 0.0;
    double rho_plus = 0.0;

    /// The box of the shifted-density argument: [rho- - m, rho+ - m]^2.
    static BoxSweep standard(int q, double rho_minus, double rho_plus, double m, int resolution);
    void validate() const;
};

struct FqCertificate {
    double min_value = 0.0;
    double arg_x = 0.0;
    double arg_y = 0.0;
    double C_q = 0.0; // min_value / rho_minus
    bool positive = false;
};

/// Grid minimum of f_q over the sweep box with one Newton polish near the
/// argmin. Throws CertificationError on a nonpositive minimum.
FqCertificate certify_fq_min(const BoxSweep& sweep);

/// R_q(X,Y) = (X-Y)^{2q} - X^{2q} - Y^{2q} + P_q(X,Y), evaluated as the
/// interior binomial sum (exact polynomial identity, compensated summation).
double remainder_Rq(double X, double Y, int q);

struct LowerPolyRow {
    int q = 0;
    double min_value = 0.0;
    double arg_x = 0.0;
    double arg_y = 0.0;
    bool ok = false; // min >= -1e-12 l^{2q}
};

struct LowerPolyReport {
    std::vector<LowerPolyRow> rows;
    bool all_ok = true;
    double l = 0.0;
    int resolution = 0;
};

/// Sweep confirming (X-Y)^{2q} >= X^{2q} + Y^{2q} - P_q on [-l,l]^2 for
/// q = 1..q_max.
LowerPolyReport certify_lowerpoly(int q_max, double l, int resolution);

/// iint |f(x)-f(y)|^{2q} dy dx - 2 (2 pi)^n |f|_{2q}^{2q} for mean-zero f
/// (the mean is subtracted first); nonnegative by the lower polynomial bound.
double zero_mean_gap(const Field& f, int q);

} // namespace feas::ineq
