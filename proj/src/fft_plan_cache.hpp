#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace aggdiff::detail {

/// Unnormalized r2c transform: out[k] = sum_j in[j] exp(-2 pi i j k / n), k = 0..n/2.
void fft_forward(std::span<const double> in, std::span<std::complex<double>> out);

/// Unnormalized c2r transform. The input is copied first since FFTW overwrites it.
void fft_backward(std::span<const std::complex<double>> in, std::span<double> out);

}  // namespace aggdiff::detail
