#include "feas/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "feas/errors.hpp"

namespace feas {

Field Field::zeros(const Grid& g) {
    Field f(g);
    f.values_.assign(static_cast<std::size_t>(g.total()), 0.0);
    f.spectral_.assign(static_cast<std::size_t>(detail::spec_count(g)), {0.0, 0.0});
    return f;
}

Field Field::constant(const Grid& g, double c) {
    Field f = zeros(g);
    std::fill(f.values_.begin(), f.values_.end(), c);
    f.spectral_[0] = c;
    return f;
}

Field Field::from_values(const Grid& g, std::vector<double> v) {
    if (static_cast<long>(v.size()) != g.total())
        throw ParameterError("value array does not match grid");
    Field f(g);
    f.values_ = std::move(v);
    f.spectral_.resize(static_cast<std::size_t>(detail::spec_count(g)));
    detail::fft_forward(g, f.values_.data(), f.spectral_.data());
    return f;
}

Field Field::from_spectral(const Grid& g, std::vector<std::complex<double>> c) {
    if (static_cast<long>(c.size()) != detail::spec_count(g))
        throw ParameterError("spectral array does not match grid");
    Field f(g);
    f.spectral_ = std::move(c);
    f.values_.resize(static_cast<std::size_t>(g.total()));
    detail::fft_inverse(g, f.spectral_.data(), f.values_.data());
    return f;
}

Field Field::sample(const Grid& g, const std::function<double(double, double)>& f) {
    std::vector<double> v(static_cast<std::size_t>(g.total()));
    if (g.ndims() == 1) {
        for (int i = 0; i < g.size(0); ++i) v[static_cast<std::size_t>(i)] = f(g.coord(0, i), 0.0);
    } else {
        const int n2 = g.size(1);
        for (int i = 0; i < g.size(0); ++i)
            for (int j = 0; j < n2; ++j)
                v[static_cast<std::size_t>(i) * n2 + j] = f(g.coord(0, i), g.coord(1, j));
    }
    return from_values(g, std::move(v));
}

double Field::Mode::kmag() const {
    return std::sqrt(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
}

Field::Mode Field::mode(long spec_index) const {
    Mode m{0, 0, 2.0};
    if (grid_.ndims() == 1) {
        m.k1 = static_cast<int>(spec_index);
        if (m.k1 == 0 || m.k1 == grid_.size(0) / 2) m.weight = 1.0;
    } else {
        const int nc2 = grid_.size(1) / 2 + 1;
        const int j1 = static_cast<int>(spec_index / nc2);
        const int j2 = static_cast<int>(spec_index % nc2);
        m.k1 = grid_.wavenumber(0, j1);
        m.k2 = j2;
        if (j2 == 0 || j2 == grid_.size(1) / 2) m.weight = 1.0;
    }
    return m;
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

double Field::linf() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool Field::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

double Field::integral() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s * grid_.cell_volume();
}

double Field::mean() const { return integral() / grid_.domain_volume(); }

double Field::lp_norm(double p) const {
    if (p < 1.0) throw ParameterError("lp_norm requires p >= 1");
    double s = 0.0;
    if (p == 2.0) {
        for (double v : values_) s += v * v;
    } else {
        for (double v : values_) s += std::pow(std::abs(v), p);
    }
    return std::pow(s * grid_.cell_volume(), 1.0 / p);
}

Field operator+(const Field& a, const Field& b) { return lincomb(1.0, a, 1.0, b); }
Field operator-(const Field& a, const Field& b) { return lincomb(1.0, a, -1.0, b); }
Field operator*(double s, const Field& a) { return lincomb(s, a, 0.0, a); }

Field lincomb(double a, const Field& x, double b, const Field& y) {
    if (!(x.grid() == y.grid())) throw ParameterError("grid mismatch");
    std::vector<double> v(x.values().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * x.values()[i] + b * y.values()[i];
    return Field::from_values(x.grid(), std::move(v));
}

Field shifted(const Field& f, double c) {
    std::vector<double> v(f.values());
    for (double& x : v) x += c;
    return Field::from_values(f.grid(), std::move(v));
}

Field multiply(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw ParameterError("grid mismatch");
    std::vector<double> v(a.values().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] * b.values()[i];
    return Field::from_values(a.grid(), std::move(v));
}

Field divide(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw ParameterError("grid mismatch");
    std::vector<double> v(a.values().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] / b.values()[i];
    return Field::from_values(a.grid(), std::move(v));
}

double inner(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw ParameterError("grid mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) s += a.values()[i] * b.values()[i];
    return s * a.grid().cell_volume();
}

} // namespace feas
