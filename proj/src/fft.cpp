#include "feas/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace feas::detail {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

struct PlanCache {
    std::map<std::pair<int, int>, PlanPair> plans;
    ~PlanCache() {
        for (auto& [key, p] : plans) {
            fftw_destroy_plan(p.fwd);
            fftw_destroy_plan(p.inv);
        }
        fftw_cleanup();
    }
};

std::mutex plan_mutex;
std::map<std::pair<int, int>, PlanPair>& plan_cache() {
    static PlanCache cache;
    return cache.plans;
}

// Planning is not thread safe in FFTW; executing a cached plan on new arrays
// is. Plans are created with FFTW_UNALIGNED so any heap buffer is valid.
PlanPair& plans_for(const Grid& g) {
    std::scoped_lock lock(plan_mutex);
    const std::pair<int, int> key{g.size(0), g.ndims() == 2 ? g.size(1) : 1};
    auto& cache = plan_cache();
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const long n_real = g.total();
    const long n_spec = spec_count(g);
    std::vector<double> rbuf(static_cast<std::size_t>(n_real));
    std::vector<fftw_complex> cbuf(static_cast<std::size_t>(n_spec));

    PlanPair p;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (g.ndims() == 1) {
        p.fwd = fftw_plan_dft_r2c_1d(g.size(0), rbuf.data(), cbuf.data(), flags);
        p.inv = fftw_plan_dft_c2r_1d(g.size(0), cbuf.data(), rbuf.data(), flags);
    } else {
        p.fwd = fftw_plan_dft_r2c_2d(g.size(0), g.size(1), rbuf.data(), cbuf.data(), flags);
        p.inv = fftw_plan_dft_c2r_2d(g.size(0), g.size(1), cbuf.data(), rbuf.data(), flags);
    }
    return cache.emplace(key, p).first->second;
}

} // namespace

long spec_count(const Grid& g) {
    if (g.ndims() == 1) return g.size(0) / 2 + 1;
    return static_cast<long>(g.size(0)) * (g.size(1) / 2 + 1);
}

void fft_forward(const Grid& g, const double* in, std::complex<double>* out) {
    PlanPair& p = plans_for(g);
    // r2c does not modify its input, but the API wants a non-const pointer.
    std::vector<double> scratch(in, in + g.total());
    fftw_execute_dft_r2c(p.fwd, scratch.data(), reinterpret_cast<fftw_complex*>(out));
    const double norm = 1.0 / static_cast<double>(g.total());
    const long nc = spec_count(g);
    for (long i = 0; i < nc; ++i) out[i] *= norm;
}

void fft_inverse(const Grid& g, const std::complex<double>* in, double* out) {
    PlanPair& p = plans_for(g);
    // c2r destroys its input, so run it on a copy.
    std::vector<std::complex<double>> scratch(in, in + spec_count(g));
    fftw_execute_dft_c2r(p.inv, reinterpret_cast<fftw_complex*>(scratch.data()), out);
}

} // namespace feas::detail
