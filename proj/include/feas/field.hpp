#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "feas/fft.hpp"
#include "feas/grid.hpp"

namespace feas {

/// Real scalar periodic function sampled on a Grid, with its spectral mirror.
/// Both representations are materialized at construction, so a constructed
/// Field is immutable and safe for concurrent reads.
class Field {
  public:
    static Field zeros(const Grid& g);
    static Field constant(const Grid& g, double c);
    static Field from_values(const Grid& g, std::vector<double> v);
    static Field from_spectral(const Grid& g, std::vector<std::complex<double>> c);
    /// Sample f(x1) in 1D or f(x1,x2) in 2D at the grid points.
    static Field sample(const Grid& g, const std::function<double(double, double)>& f);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<std::complex<double>>& spectral() const { return spectral_; }
    long size() const { return grid_.total(); }
    long spec_size() const { return static_cast<long>(spectral_.size()); }

    /// Signed wavenumbers and Hermitian multiplicity of a stored coefficient.
    struct Mode {
        int k1;
        int k2;
        double weight; // 2 for coefficients whose conjugate is not stored
        double kmag() const;
    };
    Mode mode(long spec_index) const;

    double min() const;
    double max() const;
    double linf() const;
    bool all_finite() const;
    double integral() const;           // rectangle rule, exact for band-limited f
    double mean() const;               // integral / (2*pi)^n
    double lp_norm(double p) const;    // (int |f|^p dx)^(1/p)

  private:
    Field(const Grid& g) : grid_(g) {}
    Grid grid_;
    std::vector<double> values_;
    std::vector<std::complex<double>> spectral_;
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);
/// a*x + b*y with a single transform.
Field lincomb(double a, const Field& x, double b, const Field& y);
Field shifted(const Field& f, double c);
Field multiply(const Field& a, const Field& b);
Field divide(const Field& a, const Field& b);
double inner(const Field& a, const Field& b); // int a b dx

} // namespace feas
