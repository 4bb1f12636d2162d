#include "feas/ineq.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

#include "feas/errors.hpp"

namespace feas::ineq {

namespace {

int thread_cap() {
    if (const char* env = std::getenv("FEAS_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

// Fixed-size chunks with an atomic cursor. Per-chunk results are indexed by
// chunk, so reductions merge in chunk order and the outcome does not depend
// on the thread count.
void run_chunks(long n_items, long chunk, const std::function<void(long, long, long)>& work) {
    const long n_chunks = (n_items + chunk - 1) / chunk;
    const int nthreads = static_cast<int>(std::min<long>(thread_cap(), n_chunks));
    if (nthreads <= 1) {
        for (long c = 0; c < n_chunks; ++c) work(c, c * chunk, std::min(n_items, (c + 1) * chunk));
        return;
    }
    std::atomic<long> cursor{0};
    auto body = [&] {
        for (;;) {
            const long c = cursor.fetch_add(1);
            if (c >= n_chunks) return;
            work(c, c * chunk, std::min(n_items, (c + 1) * chunk));
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads - 1; ++i) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
}

double ipow(double x, int p) {
    double acc = 1.0, base = x;
    for (int e = p; e > 0; e >>= 1) {
        if (e & 1) acc *= base;
        base *= base;
    }
    return acc;
}

// Complete homogeneous symmetric polynomial sum_{i=0}^{p} X^i Y^{p-i}.
double divided_difference(double X, double Y, int p) {
    double acc = 0.0, ypow = 1.0;
    for (int i = p; i >= 0; --i) {
        acc = acc * X + ypow;
        ypow *= Y;
    }
    return acc;
}

struct MinCell {
    double value = std::numeric_limits<double>::infinity();
    double x = 0.0;
    double y = 0.0;

    void consider(double v, double px, double py) {
        if (v < value) {
            value = v;
            x = px;
            y = py;
        }
    }
    void merge(const MinCell& o) { consider(o.value, o.x, o.y); }
};

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return std::round(b);
}

} // namespace

double f_q_value(double X, double Y, int q, double m) {
    if (q < 1) throw ParameterError("f_q requires q >= 1");
    if (q == 1) return 0.5 * (X + Y) + m;
    if (X == Y) {
        // Directional limit along X = -Y, the smallest one at the origin.
        if (X == 0.0) return m / ipow(2.0, 2 * q - 2);
        return std::numeric_limits<double>::infinity();
    }
    const double num = ((2.0 * q - 1.0) / (2.0 * q)) * divided_difference(X, Y, 2 * q - 1) +
                       m * divided_difference(X, Y, 2 * q - 2);
    return num / ipow(X - Y, 2 * q - 2);
}

BoxSweep BoxSweep::standard(int q, double rho_minus, double rho_plus, double m, int resolution) {
    BoxSweep s;
    s.q = q;
    s.m = m;
    s.rho_minus = rho_minus;
    s.rho_plus = rho_plus;
    s.x_lo = rho_minus - m;
    s.x_hi = rho_plus - m;
    s.resolution = resolution;
    return s;
}

void BoxSweep::validate() const {
    if (q < 1) throw ParameterError("BoxSweep requires q >= 1");
    if (resolution < 101) throw ParameterError("BoxSweep resolution must be >= 101");
    if (!(m > 0.0)) throw ParameterError("BoxSweep requires m > 0");
    if (x_hi < x_lo) throw ParameterError("BoxSweep bounds out of order");
}

FqCertificate certify_fq_min(const BoxSweep& sweep) {
    sweep.validate();
    const int res = sweep.resolution;
    const double span = sweep.x_hi - sweep.x_lo;
    auto coord = [&](int i) {
        return res == 1 ? sweep.x_lo : sweep.x_lo + span * i / (res - 1);
    };

    std::vector<MinCell> partial(static_cast<std::size_t>((res + 15) / 16));
    run_chunks(res, 16, [&](long c, long lo, long hi) {
        MinCell cell;
        for (long i = lo; i < hi; ++i) {
            const double X = coord(static_cast<int>(i));
            for (int j = 0; j < res; ++j) {
                const double Y = coord(j);
                const double v = f_q_value(X, Y, sweep.q, sweep.m);
                if (std::isfinite(v)) cell.consider(v, X, Y);
            }
        }
        partial[static_cast<std::size_t>(c)] = cell;
    });
    MinCell best;
    for (const MinCell& cell : partial) best.merge(cell);

    // One Newton polish on finite-difference derivatives, kept only when it
    // stays in the box and actually improves the value.
    const double h = std::max(span / (res - 1) * 1e-2, 1e-9);
    auto f = [&](double x, double y) { return f_q_value(x, y, sweep.q, sweep.m); };
    const double fx = (f(best.x + h, best.y) - f(best.x - h, best.y)) / (2 * h);
    const double fy = (f(best.x, best.y + h) - f(best.x, best.y - h)) / (2 * h);
    const double fxx = (f(best.x + h, best.y) - 2 * best.value + f(best.x - h, best.y)) / (h * h);
    const double fyy = (f(best.x, best.y + h) - 2 * best.value + f(best.x, best.y - h)) / (h * h);
    const double fxy = (f(best.x + h, best.y + h) - f(best.x + h, best.y - h) -
                        f(best.x - h, best.y + h) + f(best.x - h, best.y - h)) /
                       (4 * h * h);
    const double det = fxx * fyy - fxy * fxy;
    if (std::isfinite(det) && std::abs(det) > 1e-30) {
        const double sx = -(fyy * fx - fxy * fy) / det;
        const double sy = -(-fxy * fx + fxx * fy) / det;
        const double nx = best.x + sx, ny = best.y + sy;
        if (nx >= sweep.x_lo && nx <= sweep.x_hi && ny >= sweep.x_lo && ny <= sweep.x_hi) {
            const double nv = f(nx, ny);
            if (std::isfinite(nv) && nv < best.value) best.consider(nv, nx, ny);
        }
    }

    FqCertificate cert;
    cert.min_value = best.value;
    cert.arg_x = best.x;
    cert.arg_y = best.y;
    cert.C_q = sweep.rho_minus > 0.0 ? best.value / sweep.rho_minus : best.value;
    cert.positive = best.value > 0.0;
    if (!cert.positive)
        throw CertificationError("f_q certification found a nonpositive minimum, q = " +
                                 std::to_string(sweep.q));
    return cert;
}

double remainder_Rq(double X, double Y, int q) {
    if (q < 1) throw ParameterError("remainder_Rq requires q >= 1");
    // Interior binomial terms sum_{k=2}^{2q-2} (-1)^k C(2q,k) X^{2q-k} Y^k,
    // Kahan-compensated against the alternating cancellation.
    double sum = 0.0, comp = 0.0;
    for (int k = 2; k <= 2 * q - 2; ++k) {
        const double term =
            ((k & 1) ? -1.0 : 1.0) * binomial(2 * q, k) * ipow(X, 2 * q - k) * ipow(Y, k);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

LowerPolyReport certify_lowerpoly(int q_max, double l, int resolution) {
    if (q_max < 1) throw ParameterError("q_max must be >= 1");
    if (!(l > 0.0)) throw ParameterError("l must be positive");
    if (resolution < 101) throw ParameterError("resolution must be >= 101");
    LowerPolyReport rep;
    rep.l = l;
    rep.resolution = resolution;
    auto coord = [&](int i) { return -l + 2.0 * l * i / (resolution - 1); };
    for (int q = 1; q <= q_max; ++q) {
        std::vector<MinCell> partial(static_cast<std::size_t>((resolution + 15) / 16));
        run_chunks(resolution, 16, [&](long c, long lo, long hi) {
            MinCell cell;
            for (long i = lo; i < hi; ++i) {
                const double X = coord(static_cast<int>(i));
                for (int j = 0; j < resolution; ++j) {
                    const double Y = coord(j);
                    cell.consider(remainder_Rq(X, Y, q), X, Y);
                }
            }
            partial[static_cast<std::size_t>(c)] = cell;
        });
        MinCell best;
        for (const MinCell& cell : partial) best.merge(cell);
        LowerPolyRow row{q, best.value, best.x, best.y,
                         best.value >= -1e-12 * ipow(l, 2 * q)};
        rep.all_ok = rep.all_ok && row.ok;
        rep.rows.push_back(row);
    }
    return rep;
}

double zero_mean_gap(const Field& f, int q) {
    if (q < 1) throw ParameterError("zero_mean_gap requires q >= 1");
    const double mean = f.mean();
    std::vector<double> v(f.values());
    for (double& x : v) x -= mean;
    const long n = static_cast<long>(v.size());
    const double w = f.grid().cell_volume();

    std::vector<double> partial(static_cast<std::size_t>((n + 255) / 256), 0.0);
    run_chunks(n, 256, [&](long c, long lo, long hi) {
        double acc = 0.0;
        for (long i = lo; i < hi; ++i)
            for (long j = 0; j < n; ++j)
                acc += ipow(v[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)], 2 * q);
        partial[static_cast<std::size_t>(c)] = acc;
    });
    double double_sum = 0.0;
    for (double p : partial) double_sum += p;
    double_sum *= w * w;

    double norm = 0.0;
    for (double x : v) norm += ipow(x, 2 * q);
    norm *= w;
    return double_sum - 2.0 * f.grid().domain_volume() * norm;
}

} // namespace feas::ineq
