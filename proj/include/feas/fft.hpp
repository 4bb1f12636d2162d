#pragma once

#include <complex>

#include "feas/grid.hpp"

namespace feas::detail {

/// Real-to-complex transform, normalized so coefficients are the Fourier
/// series coefficients: f(x) = sum_k fhat(k) e^{i k.x}. The half-spectrum
/// layout follows FFTW r2c (last axis truncated to N/2+1).
void fft_forward(const Grid& g, const double* in, std::complex<double>* out);

/// Inverse of fft_forward. The input array is left untouched.
void fft_inverse(const Grid& g, const std::complex<double>* in, double* out);

/// Number of stored half-spectrum coefficients.
long spec_count(const Grid& g);

} // namespace feas::detail
