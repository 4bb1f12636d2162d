#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "feas/errors.hpp"

namespace feas {

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Periodic tensor grid on T^n, n in {1,2}. Every axis has period 2*pi and a
/// power-of-two point count, so integer wavenumbers run over
/// {-N_i/2, ..., N_i/2 - 1}.
class Grid {
  public:
    static Grid line(int n1) { return Grid(1, n1, 1); }
    static Grid plane(int n1, int n2) { return Grid(2, n1, n2); }

    int ndims() const { return ndims_; }
    int size(int axis) const { return n_[static_cast<std::size_t>(axis)]; }
    long total() const { return static_cast<long>(n_[0]) * n_[1]; }
    double dx(int axis) const { return two_pi / size(axis); }
    double cell_volume() const {
        return ndims_ == 1 ? dx(0) : dx(0) * dx(1);
    }
    double domain_volume() const { return std::pow(two_pi, ndims_); }

    /// Signed integer wavenumber for a full-spectrum index along one axis.
    int wavenumber(int axis, int index) const {
        const int n = size(axis);
        return index <= n / 2 ? index : index - n;
    }

    /// Coordinate of grid point `index` along `axis`.
    double coord(int axis, int index) const { return dx(axis) * index; }

    /// Largest |k| representable on the grid.
    double kmax() const {
        double s = 0.0;
        for (int a = 0; a < ndims_; ++a) {
            const double h = size(a) / 2.0;
            s += h * h;
        }
        return std::sqrt(s);
    }

    bool operator==(const Grid&) const = default;

  private:
    Grid(int nd, int n1, int n2) : ndims_(nd), n_{n1, n2} {
        for (int a = 0; a < nd; ++a) {
            const int n = n_[static_cast<std::size_t>(a)];
            if (n < 8 || (n & (n - 1)) != 0)
                throw ParameterError("grid size must be a power of two >= 8");
        }
    }

    int ndims_;
    std::array<int, 2> n_;
};

} // namespace feas
