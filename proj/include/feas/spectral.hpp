#pragma once

#include <vector>

#include "feas/field.hpp"

namespace feas::spectral {

/// Lambda^alpha, the Fourier multiplier |k|^alpha (zero mode annihilated).
/// alpha must lie in (0,2].
Field frac_laplacian(const Field& f, double alpha);

/// Spectral derivative along the flow axis (i k_1, Nyquist mode zeroed).
Field partial_x1(const Field& f);
Field partial_axis(const Field& f, int axis);

/// Pointwise gradient magnitude maximum.
double grad_linf(const Field& f);

/// 2/3-rule low-pass: zero every mode with |k_i| > floor(N_i/3) on any axis.
Field dealias(const Field& f);

enum class LpMode { isotropic, anisotropic_x1 };

/// Smooth radial cutoff: 1 on |xi| <= 3/4, 0 on |xi| >= 1, C-infinity between.
double chi(double xi);

/// Dyadic scale lambda_q = 2^q.
double lambda_q(int q);

/// Mask value phi_q at frequency magnitude xi (q >= -1).
double lp_mask(int q, double xi);

/// Largest block index on the grid: the partition sum over q = -1..qmax
/// equals one at every representable frequency.
int lp_qmax(const Grid& g, LpMode mode);

/// Littlewood-Paley block Delta_q f (isotropic) or Delta_q^{x1} f.
Field lp_project(const Field& f, int q, LpMode mode);

/// Low-pass partial sum S_Q f = sum_{q=-1}^{Q} Delta_q f.
Field lp_lowpass(const Field& f, int Q, LpMode mode);

struct BesovResult {
    double norm = 0.0;
    double l3 = 0.0; // reported in anisotropic mode for the intersection norm
};

/// l^r over q of lambda_q^s |Delta_q f|_{L^p}; r = infinity when r <= 0 or
/// non-finite.
BesovResult besov_norm(const Field& f, double s, double p, double r, LpMode mode);

struct TailEntry {
    int q;
    double value; // lambda_q^s |Delta_q f|_p
};

struct TailReport {
    std::vector<TailEntry> seq;
    bool monotone_tail = false; // last three blocks strictly non-increasing
};

/// Per-block sequence for inspecting the B^s_{p,c0} tail condition.
TailReport c0_tail(const Field& f, double s, double p, LpMode mode);

struct OnsagerIndicator {
    double seminorm = 0.0; // sup_q lambda_q^{1/3} |Delta_q^{x1} f|_{L^3}
    std::vector<TailEntry> tail;
};

/// Anisotropic B^{1/3}_{3,infinity}-type seminorm with its c0 tail sequence.
OnsagerIndicator onsager_indicator(const Field& f);

} // namespace feas::spectral
