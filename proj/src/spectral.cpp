#include "feas/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "feas/errors.hpp"

namespace feas::spectral {

namespace {

bool valid_alpha(double a) { return a > 0.0 && a <= 2.0; }

// Multiply the half-spectrum by a function of the signed wavenumbers.
template <typename F>
Field apply_multiplier(const Field& f, F&& mult) {
    std::vector<std::complex<double>> c(f.spectral());
    for (long i = 0; i < f.spec_size(); ++i) {
        const Field::Mode m = f.mode(i);
        c[static_cast<std::size_t>(i)] *= mult(m);
    }
    return Field::from_spectral(f.grid(), std::move(c));
}

} // namespace

Field frac_laplacian(const Field& f, double alpha) {
    if (!valid_alpha(alpha)) throw ParameterError("alpha must lie in (0,2]");
    return apply_multiplier(f, [alpha](const Field::Mode& m) {
        const double k = m.kmag();
        return k == 0.0 ? 0.0 : std::pow(k, alpha);
    });
}

Field partial_axis(const Field& f, int axis) {
    if (axis < 0 || axis >= f.grid().ndims()) throw ParameterError("axis out of range");
    const int nyq = f.grid().size(axis) / 2;
    std::vector<std::complex<double>> c(f.spectral());
    for (long i = 0; i < f.spec_size(); ++i) {
        const Field::Mode m = f.mode(i);
        const int k = axis == 0 ? m.k1 : m.k2;
        // The Nyquist mode has no signed counterpart; an odd multiplier must
        // drop it to keep the derivative real.
        const double keff = (std::abs(k) == nyq) ? 0.0 : static_cast<double>(k);
        c[static_cast<std::size_t>(i)] *= std::complex<double>(0.0, keff);
    }
    return Field::from_spectral(f.grid(), std::move(c));
}

Field partial_x1(const Field& f) { return partial_axis(f, 0); }

double grad_linf(const Field& f) {
    const Field d1 = partial_axis(f, 0);
    if (f.grid().ndims() == 1) return d1.linf();
    const Field d2 = partial_axis(f, 1);
    double m = 0.0;
    for (std::size_t i = 0; i < d1.values().size(); ++i) {
        const double g = std::hypot(d1.values()[i], d2.values()[i]);
        m = std::max(m, g);
    }
    return m;
}

Field dealias(const Field& f) {
    const Grid& g = f.grid();
    std::vector<std::complex<double>> c(f.spectral());
    for (long i = 0; i < f.spec_size(); ++i) {
        const Field::Mode m = f.mode(i);
        bool keep = std::abs(m.k1) <= g.size(0) / 3;
        if (g.ndims() == 2) keep = keep && std::abs(m.k2) <= g.size(1) / 3;
        if (!keep) c[static_cast<std::size_t>(i)] = 0.0;
    }
    return Field::from_spectral(g, std::move(c));
}

double chi(double xi) {
    // chi(xi) = sigma(4(1-|xi|)) with sigma(t) = g(t)/(g(t)+g(1-t)),
    // g(t) = exp(-1/t) for t > 0. Exactly 1 for |xi| <= 3/4, 0 for |xi| >= 1.
    const double t = 4.0 * (1.0 - std::abs(xi));
    if (t >= 1.0) return 1.0;
    if (t <= 0.0) return 0.0;
    const double ga = std::exp(-1.0 / t);
    const double gb = std::exp(-1.0 / (1.0 - t));
    return ga / (ga + gb);
}

double lambda_q(int q) { return std::ldexp(1.0, q); }

double lp_mask(int q, double xi) {
    if (q < -1) throw RangeError("block index must be >= -1");
    if (q == -1) return chi(xi);
    return chi(xi / lambda_q(q + 1)) - chi(xi / lambda_q(q));
}

namespace {

double max_frequency(const Grid& g, LpMode mode) {
    return mode == LpMode::anisotropic_x1 ? g.size(0) / 2.0 : g.kmax();
}

double block_frequency(const Field::Mode& m, LpMode mode) {
    return mode == LpMode::anisotropic_x1 ? std::abs(static_cast<double>(m.k1)) : m.kmag();
}

} // namespace

int lp_qmax(const Grid& g, LpMode mode) {
    const double ximax = max_frequency(g, mode);
    int q = -1;
    while (0.75 * lambda_q(q + 1) < ximax) ++q;
    return q;
}

Field lp_project(const Field& f, int q, LpMode mode) {
    if (q < -1) throw RangeError("block index must be >= -1");
    if (q > lp_qmax(f.grid(), mode)) throw RangeError("block index beyond grid Nyquist");
    return apply_multiplier(f, [q, mode](const Field::Mode& m) {
        return lp_mask(q, block_frequency(m, mode));
    });
}

Field lp_lowpass(const Field& f, int Q, LpMode mode) {
    if (Q < -1) throw RangeError("block index must be >= -1");
    const double lam = lambda_q(Q + 1);
    return apply_multiplier(f, [lam, mode](const Field::Mode& m) {
        return chi(block_frequency(m, mode) / lam);
    });
}

BesovResult besov_norm(const Field& f, double s, double p, double r, LpMode mode) {
    if (p < 1.0) throw ParameterError("besov_norm requires p >= 1");
    if (r > 0.0 && r < 1.0) throw ParameterError("besov_norm requires r >= 1 (or r <= 0 for sup)");
    const int qmax = lp_qmax(f.grid(), mode);
    const bool sup_norm = r <= 0.0 || !std::isfinite(r);
    double acc = 0.0;
    for (int q = -1; q <= qmax; ++q) {
        const double a = std::pow(lambda_q(q), s) * lp_project(f, q, mode).lp_norm(p);
        if (sup_norm)
            acc = std::max(acc, a);
        else
            acc += std::pow(a, r);
    }
    BesovResult res;
    res.norm = sup_norm ? acc : std::pow(acc, 1.0 / r);
    if (mode == LpMode::anisotropic_x1) res.l3 = f.lp_norm(3.0);
    return res;
}

TailReport c0_tail(const Field& f, double s, double p, LpMode mode) {
    const int qmax = lp_qmax(f.grid(), mode);
    TailReport rep;
    for (int q = -1; q <= qmax; ++q) {
        const double a = std::pow(lambda_q(q), s) * lp_project(f, q, mode).lp_norm(p);
        rep.seq.push_back({q, a});
    }
    const std::size_t n = rep.seq.size();
    if (n >= 3) {
        rep.monotone_tail = rep.seq[n - 2].value <= rep.seq[n - 3].value &&
                            rep.seq[n - 1].value <= rep.seq[n - 2].value;
    }
    return rep;
}

OnsagerIndicator onsager_indicator(const Field& f) {
    OnsagerIndicator ind;
    const TailReport rep = c0_tail(f, 1.0 / 3.0, 3.0, LpMode::anisotropic_x1);
    ind.tail = rep.seq;
    for (const TailEntry& e : rep.seq) ind.seminorm = std::max(ind.seminorm, e.value);
    return ind;
}

} // namespace feas::spectral
