#include "feas/kernel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "feas/errors.hpp"
#include "feas/spectral.hpp"

namespace feas::kernel {

namespace {

constexpr double lattice_eps = 1e-12;

// Euler-Maclaurin evaluation of sum_{k > K} (k + a)^{-p}, a in (-1,1),
// shifted by the remainder magnitude so the result is a slight underestimate
// and the truncated-plus-tail value increases monotonically in K.
double power_sum_tail(int K, double a, double p) {
    const double b = K + 1 + a;
    const double ip = std::pow(b, 1.0 - p) / (p - 1.0);
    const double t0 = 0.5 * std::pow(b, -p);
    const double t1 = p * std::pow(b, -p - 1.0) / 12.0;
    const double t3 = -p * (p + 1.0) * (p + 2.0) * std::pow(b, -p - 3.0) / 720.0;
    const double t5 = p * (p + 1.0) * (p + 2.0) * (p + 3.0) * (p + 4.0) *
                      std::pow(b, -p - 5.0) / 30240.0;
    const double rem = p * (p + 1.0) * (p + 2.0) * (p + 3.0) * (p + 4.0) * (p + 5.0) *
                       (p + 6.0) * std::pow(b, -p - 7.0) / 1209600.0;
    return ip + t0 + t1 + t3 + t5 - rem;
}

double periodized_1d(double z, double p, int images) {
    // Reduce to z in (0, 2 pi), then split the lattice sum into the two
    // one-sided branches (k + c)^{-p} and (k - c)^{-p}, c = z / 2 pi.
    double c = z / two_pi - std::floor(z / two_pi);
    if (c < lattice_eps || c > 1.0 - lattice_eps)
        throw SingularityError("periodized kernel evaluated at a lattice point");
    double s = 0.0;
    for (int k = 0; k <= images; ++k) s += std::pow(k + c, -p);
    for (int k = 1; k <= images; ++k) s += std::pow(k - c, -p);
    s += power_sum_tail(images, c, p) + power_sum_tail(images, -c, p);
    return s * std::pow(two_pi, -p);
}

// int_0^s (1 + t^2)^{-(2+alpha)/2} dt by Simpson on a fixed fine mesh.
double strip_profile(double s, double alpha) {
    const int n = 512;
    const double h = s / n;
    double acc = 0.0;
    auto f = [alpha](double t) { return std::pow(1.0 + t * t, -(2.0 + alpha) / 2.0); };
    for (int i = 0; i < n; ++i) {
        const double a = i * h;
        acc += (f(a) + 4.0 * f(a + 0.5 * h) + f(a + h)) * h / 6.0;
    }
    return acc;
}

// Lattice tail sum_{|k|_inf > K} |2 pi k|^{-(2+alpha)}, approximated by the
// unit-lattice integral over the region outside the square [-L_k, L_k]^2:
// two full vertical strips plus the two horizontal strip remainders.
double square_tail_2d(double L_k, double alpha) {
    const double B = std::sqrt(M_PI) * std::tgamma((1.0 + alpha) / 2.0) /
                     std::tgamma((2.0 + alpha) / 2.0);
    // Horizontal remainders reduce to int_0^1 s^{alpha-1} F(s) ds.
    const int n = 256;
    double horiz = 0.0;
    auto f = [alpha](double s) { return std::pow(s, alpha - 1.0) * strip_profile(s, alpha); };
    const double h = 1.0 / n;
    for (int i = 0; i < n; ++i) {
        const double a = i * h;
        // Integrand vanishes like s^alpha at 0; midpoint avoids the endpoint.
        horiz += f(a + 0.5 * h) * h;
    }
    return std::pow(two_pi, -(2.0 + alpha)) * std::pow(L_k, -alpha) *
           (2.0 * B / alpha + 4.0 * horiz);
}

double periodized_2d(double z1, double z2, double p, double alpha, int images) {
    auto reduce = [](double z) { return z - two_pi * std::round(z / two_pi); };
    const double r1 = reduce(z1), r2 = reduce(z2);
    if (std::abs(r1) < lattice_eps && std::abs(r2) < lattice_eps)
        throw SingularityError("periodized kernel evaluated at a lattice point");
    double s = 0.0;
    for (int k1 = -images; k1 <= images; ++k1)
        for (int k2 = -images; k2 <= images; ++k2) {
            const double w1 = r1 + two_pi * k1;
            const double w2 = r2 + two_pi * k2;
            s += std::pow(w1 * w1 + w2 * w2, -p / 2.0);
        }
    s += square_tail_2d(images + 0.5, alpha);
    return s;
}

struct TableKey {
    int n1, n2;
    double alpha;
    auto operator<=>(const TableKey&) const = default;
};

struct KernelTable {
    std::vector<double> weight;      // phi_alpha(z_j) * cell volume, origin = 0
    std::array<double, 2> moment{};  // per-axis int_cell z_a^2 phi_alpha dz
    double navot = 0.0;              // midpoint-rule defect constant for |z|^{1-alpha}
};

// zeta_mid(beta) = sum_{j>=1} [ j^beta - int_{j-1/2}^{j+1/2} s^beta ds ],
// the per-cell defect of the midpoint rule against the singular power law.
// Converges for beta < 1; vanishes at beta = 0.
double zeta_mid(double beta) {
    const int J = 200000;
    double s = 0.0;
    const double b1 = beta + 1.0;
    for (int j = J; j >= 1; --j) {
        const double cell = (std::pow(j + 0.5, b1) - std::pow(j - 0.5, b1)) / b1;
        s += std::pow(static_cast<double>(j), beta) - cell;
    }
    return s;
}

// 2D midpoint defect sum_{k != 0} [ m(k) - int_{cell(k)} m ] for the model
// m(z) = z_1^2 |z|^{-(2+alpha)} on the unit lattice (axes are equivalent by
// symmetry). Cell integrals by 4x4 Gauss-Legendre.
double lattice_defect_2d(double alpha) {
    static const double gx[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
    static const double gw[4] = {0.34785484513745385, 0.6521451548625461,
                                 0.6521451548625461, 0.34785484513745385};
    auto m = [alpha](double z1, double z2) {
        const double r2 = z1 * z1 + z2 * z2;
        return z1 * z1 * std::pow(r2, -(2.0 + alpha) / 2.0);
    };
    const int K = 40;
    double s = 0.0;
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            double cell = 0.0;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    cell += gw[a] * gw[b] * m(k1 + 0.5 * gx[a], k2 + 0.5 * gx[b]);
            s += m(k1, k2) - 0.25 * cell;
        }
    return s;
}

std::mutex table_mutex;
std::map<TableKey, KernelTable>& table_cache() {
    static std::map<TableKey, KernelTable> cache;
    return cache;
}

// phi_alpha minus its singular image, evaluated at the origin:
// sum_{k != 0} |2 pi k|^{-(n+alpha)}.
double regular_part_at_zero(int n, double alpha, int images) {
    const double p = n + alpha;
    if (n == 1) {
        double s = 0.0;
        for (int k = 1; k <= images; ++k) s += std::pow(k, -p);
        s += power_sum_tail(images, 0.0, p);
        return 2.0 * std::pow(two_pi, -p) * s;
    }
    double s = 0.0;
    for (int k1 = -images; k1 <= images; ++k1)
        for (int k2 = -images; k2 <= images; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            s += std::pow(two_pi * std::hypot(k1, k2), -p);
        }
    return s + square_tail_2d(images + 0.5, alpha);
}

const KernelTable& table_for(const Grid& g, double alpha) {
    std::scoped_lock lock(table_mutex);
    const TableKey key{g.size(0), g.ndims() == 2 ? g.size(1) : 0, alpha};
    auto& cache = table_cache();
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    KernelTable t;
    const int n = g.ndims();
    const int images = n == 1 ? 64 : 24;
    const double vol = g.cell_volume();
    t.weight.assign(static_cast<std::size_t>(g.total()), 0.0);
    if (n == 1) {
        for (int j = 1; j < g.size(0); ++j)
            t.weight[static_cast<std::size_t>(j)] =
                periodized({g.coord(0, j), 0.0}, 1, alpha, images) * vol;
        // int_cell z^2 phi_alpha(z) dz = int |z|^{1-alpha} + smooth remainder.
        const double h = g.dx(0);
        t.moment[0] = 2.0 * std::pow(0.5 * h, 2.0 - alpha) / (2.0 - alpha) +
                      regular_part_at_zero(1, alpha, 256) * h * h * h / 12.0;
        t.navot = zeta_mid(1.0 - alpha);
    } else {
        for (int j1 = 0; j1 < g.size(0); ++j1)
            for (int j2 = 0; j2 < g.size(1); ++j2) {
                if (j1 == 0 && j2 == 0) continue;
                t.weight[static_cast<std::size_t>(j1) * g.size(1) + j2] =
                    periodized({g.coord(0, j1), g.coord(1, j2)}, 2, alpha, images) * vol;
            }
        // int_cell z_a^2 |z|^{-(2+alpha)} over the rectangular cell, by the
        // polar formula for an equal-area square plus the regular remainder.
        const double h = std::sqrt(g.dx(0) * g.dx(1));
        double ang = 0.0;
        const int m = 256;
        for (int i = 0; i < m; ++i) {
            const double th = (i + 0.5) * (M_PI / 4.0) / m;
            ang += std::pow(std::cos(th), alpha - 2.0) * (M_PI / 4.0) / m;
        }
        const double cell_int = 8.0 * std::pow(0.5 * h, 2.0 - alpha) / (2.0 - alpha) * ang;
        const double reg = regular_part_at_zero(2, alpha, 64);
        t.moment[0] = t.moment[1] =
            0.5 * cell_int + reg * h * h * h * h / 12.0;
        t.navot = lattice_defect_2d(alpha);
    }
    return cache.emplace(key, std::move(t)).first->second;
}

void check_kernel_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw ParameterError("kernel form requires alpha in (0,2)");
}

// Trigonometric refinement of a 1D field by zero-padding its spectrum; the
// coarse Nyquist coefficient splits between the +-N/2 modes of the fine grid.
Field upsample_1d(const Field& f, int ratio) {
    if (ratio == 1) return f;
    const Grid fine = Grid::line(f.grid().size(0) * ratio);
    std::vector<std::complex<double>> c(
        static_cast<std::size_t>(detail::spec_count(fine)), {0.0, 0.0});
    const int nyq = f.grid().size(0) / 2;
    for (long i = 0; i < f.spec_size(); ++i)
        c[static_cast<std::size_t>(i)] =
            (i == nyq) ? 0.5 * f.spectral()[static_cast<std::size_t>(i)]
                       : f.spectral()[static_cast<std::size_t>(i)];
    return Field::from_spectral(fine, std::move(c));
}

long wrap_index(const Grid& g, int axis, int i) { return (i % g.size(axis) + g.size(axis)) % g.size(axis); }

double top_octave_fraction(const Field& f) {
    double top = 0.0, all = 0.0;
    for (long i = 0; i < f.spec_size(); ++i) {
        const Field::Mode m = f.mode(i);
        if (m.k1 == 0 && m.k2 == 0) continue;
        const double e = m.weight * std::norm(f.spectral()[static_cast<std::size_t>(i)]);
        all += e;
        if (m.kmag() > 0.5 * f.grid().kmax()) top += e;
    }
    return all > 0.0 ? top / all : 0.0;
}

} // namespace

double multiplier_constant(int n, double alpha) {
    check_kernel_alpha(alpha);
    // |Gamma(-alpha/2)| via the reflection formula keeps alpha -> 2 stable.
    const double abs_gamma_neg = M_PI / (std::sin(M_PI * alpha / 2.0) * std::tgamma(1.0 + alpha / 2.0));
    return std::pow(2.0, alpha) * std::tgamma((n + alpha) / 2.0) /
           (std::pow(M_PI, n / 2.0) * abs_gamma_neg);
}

double periodized(const std::array<double, 2>& z, int n, double alpha, int images) {
    check_kernel_alpha(alpha);
    if (images < 1) throw ParameterError("images must be >= 1");
    if (n == 1) return periodized_1d(z[0], 1.0 + alpha, images);
    if (n == 2) return periodized_2d(z[0], z[1], 2.0 + alpha, alpha, images);
    throw ParameterError("periodized kernel supports n in {1,2}");
}

double periodized_inf(int n, double alpha, int images) {
    return periodized({M_PI, M_PI}, n, alpha, images);
}

double normalized_inf(int n, double alpha) {
    return multiplier_constant(n, alpha) * periodized_inf(n, alpha);
}

Field quadrature_frac_laplacian(const Field& f_in, double alpha) {
    check_kernel_alpha(alpha);
    // The difference form annihilates constants; removing the mean makes
    // that exact in floating point as well.
    const Field f = shifted(f_in, -f_in.mean());
    const Grid& g = f.grid();
    const KernelTable& t = table_for(g, alpha);
    const double c = multiplier_constant(g.ndims(), alpha);
    const auto& v = f.values();
    std::vector<double> out(v.size());

    if (g.ndims() == 1) {
        // Work on a refined offset lattice; the punctured midpoint sum gets
        // the exact singular-cell moment plus the Navot defect of the
        // |z|^{1-alpha} leading behavior.
        const int ratio = 4;
        const Field ff = upsample_1d(f, ratio);
        const Grid& fg = ff.grid();
        const KernelTable& ft = table_for(fg, alpha);
        const auto& fv = ff.values();
        const int nf = fg.size(0);
        const double h = fg.dx(0);
        const double navot_scale = 2.0 * ft.navot * std::pow(h, 2.0 - alpha);
        for (int i = 0; i < g.size(0); ++i) {
            const int fi = i * ratio;
            const double f0 = fv[static_cast<std::size_t>(fi)];
            double s = 0.0;
            for (int j = 1; j < nf; ++j)
                s += (f0 - fv[static_cast<std::size_t>((fi + j) % nf)]) *
                     ft.weight[static_cast<std::size_t>(j)];
            auto at = [&](int k) { return fv[static_cast<std::size_t>((fi + k % nf + nf) % nf)]; };
            // Fourth-order second difference.
            const double d2 = (-at(2) + 16.0 * at(1) - 30.0 * f0 + 16.0 * at(-1) - at(-2)) /
                              (12.0 * h * h);
            out[static_cast<std::size_t>(i)] =
                c * (s - 0.5 * d2 * ft.moment[0] + 0.5 * d2 * navot_scale);
        }
    } else {
        const int n1 = g.size(0), n2 = g.size(1);
        const double h1 = g.dx(0), h2 = g.dx(1);
        const double navot_scale = t.navot * std::pow(std::sqrt(h1 * h2), 2.0 - alpha);
        auto at = [&](int i1, int i2) {
            return v[static_cast<std::size_t>(wrap_index(g, 0, i1)) * n2 + wrap_index(g, 1, i2)];
        };
        for (int i1 = 0; i1 < n1; ++i1)
            for (int i2 = 0; i2 < n2; ++i2) {
                double s = 0.0;
                const double fv = at(i1, i2);
                for (int j1 = 0; j1 < n1; ++j1)
                    for (int j2 = 0; j2 < n2; ++j2) {
                        if (j1 == 0 && j2 == 0) continue;
                        s += (fv - at(i1 + j1, i2 + j2)) * t.weight[static_cast<std::size_t>(j1) * n2 + j2];
                    }
                const double d2a = (-at(i1 + 2, i2) + 16.0 * at(i1 + 1, i2) - 30.0 * fv +
                                    16.0 * at(i1 - 1, i2) - at(i1 - 2, i2)) /
                                   (12.0 * h1 * h1);
                const double d2b = (-at(i1, i2 + 2) + 16.0 * at(i1, i2 + 1) - 30.0 * fv +
                                    16.0 * at(i1, i2 - 1) - at(i1, i2 - 2)) /
                                   (12.0 * h2 * h2);
                out[static_cast<std::size_t>(i1) * n2 + i2] =
                    c * (s - 0.5 * (d2a * t.moment[0] + d2b * t.moment[1]) +
                         0.5 * (d2a + d2b) * navot_scale);
            }
    }
    return Field::from_values(g, std::move(out));
}

Field quadrature_alignment(const Field& u, const Field& rho, double alpha, bool* under_resolved) {
    check_kernel_alpha(alpha);
    if (!(u.grid() == rho.grid())) throw ParameterError("grid mismatch");
    const Grid& g = u.grid();
    const KernelTable& t = table_for(g, alpha);
    const double c = multiplier_constant(g.ndims(), alpha);
    if (under_resolved)
        *under_resolved = top_octave_fraction(u) > 1e-10 || top_octave_fraction(rho) > 1e-10;

    const auto& uv = u.values();
    const auto& rv = rho.values();
    std::vector<double> out(uv.size());

    if (g.ndims() == 1) {
        const int n1 = g.size(0);
        const double h = g.dx(0);
        for (int i = 0; i < n1; ++i) {
            double s = 0.0;
            for (int j = 1; j < n1; ++j) {
                const long ij = wrap_index(g, 0, i + j);
                s += (uv[static_cast<std::size_t>(ij)] - uv[static_cast<std::size_t>(i)]) *
                     rv[static_cast<std::size_t>(ij)] * t.weight[static_cast<std::size_t>(j)];
            }
            const long ip = wrap_index(g, 0, i + 1), im = wrap_index(g, 0, i - 1);
            const double d2u = (uv[static_cast<std::size_t>(ip)] - 2.0 * uv[static_cast<std::size_t>(i)] +
                                uv[static_cast<std::size_t>(im)]) / (h * h);
            const double du = (uv[static_cast<std::size_t>(ip)] - uv[static_cast<std::size_t>(im)]) / (2.0 * h);
            const double dr = (rv[static_cast<std::size_t>(ip)] - rv[static_cast<std::size_t>(im)]) / (2.0 * h);
            out[static_cast<std::size_t>(i)] =
                c * (s + t.moment[0] * (0.5 * rv[static_cast<std::size_t>(i)] * d2u + du * dr));
        }
    } else {
        const int n1 = g.size(0), n2 = g.size(1);
        auto uat = [&](int i1, int i2) {
            return uv[static_cast<std::size_t>(wrap_index(g, 0, i1)) * n2 + wrap_index(g, 1, i2)];
        };
        auto rat = [&](int i1, int i2) {
            return rv[static_cast<std::size_t>(wrap_index(g, 0, i1)) * n2 + wrap_index(g, 1, i2)];
        };
        for (int i1 = 0; i1 < n1; ++i1)
            for (int i2 = 0; i2 < n2; ++i2) {
                double s = 0.0;
                const double u0 = uat(i1, i2);
                for (int j1 = 0; j1 < n1; ++j1)
                    for (int j2 = 0; j2 < n2; ++j2) {
                        if (j1 == 0 && j2 == 0) continue;
                        s += (uat(i1 + j1, i2 + j2) - u0) * rat(i1 + j1, i2 + j2) *
                             t.weight[static_cast<std::size_t>(j1) * n2 + j2];
                    }
                double corr = 0.0;
                const double h1 = g.dx(0), h2 = g.dx(1);
                const double r0 = rat(i1, i2);
                corr += t.moment[0] * (0.5 * r0 * (uat(i1 + 1, i2) - 2.0 * u0 + uat(i1 - 1, i2)) / (h1 * h1) +
                                       (uat(i1 + 1, i2) - uat(i1 - 1, i2)) * (rat(i1 + 1, i2) - rat(i1 - 1, i2)) /
                                           (4.0 * h1 * h1));
                corr += t.moment[1] * (0.5 * r0 * (uat(i1, i2 + 1) - 2.0 * u0 + uat(i1, i2 - 1)) / (h2 * h2) +
                                       (uat(i1, i2 + 1) - uat(i1, i2 - 1)) * (rat(i1, i2 + 1) - rat(i1, i2 - 1)) /
                                           (4.0 * h2 * h2));
                out[static_cast<std::size_t>(i1) * n2 + i2] = c * (s + corr);
            }
    }
    return Field::from_values(g, std::move(out));
}

Field grad_dissipation(const Field& u) {
    const Grid& g = u.grid();
    const KernelTable& t = table_for(g, 1.0);
    const int n = g.ndims();
    const Field g1 = spectral::partial_axis(u, 0);
    const Field g2 = n == 2 ? spectral::partial_axis(u, 1) : Field::zeros(g);

    const auto& a = g1.values();
    const auto& b = g2.values();
    std::vector<double> out(a.size(), 0.0);
    const int n1 = g.size(0);
    const int n2 = n == 2 ? g.size(1) : 1;
    auto idx = [&](int i1, int i2) {
        return static_cast<std::size_t>(wrap_index(g, 0, i1)) * n2 +
               (n == 2 ? wrap_index(g, 1, i2) : 0);
    };
    for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2) {
            const std::size_t i0 = idx(i1, i2);
            double s = 0.0;
            for (int j1 = 0; j1 < n1; ++j1)
                for (int j2 = 0; j2 < n2; ++j2) {
                    if (j1 == 0 && j2 == 0) continue;
                    const std::size_t ij = idx(i1 + j1, i2 + j2);
                    const double d1 = a[ij] - a[i0];
                    const double d2 = b[ij] - b[i0];
                    s += (d1 * d1 + d2 * d2) *
                         t.weight[static_cast<std::size_t>(j1) * n2 + j2];
                }
            // Singular cell: |d grad u|^2 ~ sum_a (z . grad g_a)^2.
            double corr = 0.0;
            {
                const double h1 = g.dx(0);
                const double da1 = (a[idx(i1 + 1, i2)] - a[idx(i1 - 1, i2)]) / (2.0 * h1);
                const double db1 = (b[idx(i1 + 1, i2)] - b[idx(i1 - 1, i2)]) / (2.0 * h1);
                corr += t.moment[0] * (da1 * da1 + db1 * db1);
                if (n == 2) {
                    const double h2 = g.dx(1);
                    const double da2 = (a[idx(i1, i2 + 1)] - a[idx(i1, i2 - 1)]) / (2.0 * h2);
                    const double db2 = (b[idx(i1, i2 + 1)] - b[idx(i1, i2 - 1)]) / (2.0 * h2);
                    corr += t.moment[1] * (da2 * da2 + db2 * db2);
                }
            }
            out[i0] = s + corr;
        }
    return Field::from_values(g, std::move(out));
}

} // namespace feas::kernel
