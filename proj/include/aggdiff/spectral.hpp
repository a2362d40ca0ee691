#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "aggdiff/grid.hpp"

namespace aggdiff {

/// Fourier coefficients of a real Field under the convention
///
///     f(x_j) = sum_{k=-n/2}^{n/2-1} c_k exp(i k x_j).
///
/// Only k = 0..n/2 is stored; negative modes follow from c_{-k} = conj(c_k).
/// The Nyquist coefficient (k = -n/2) is stored at index n/2.
class Spectrum {
public:
    Spectrum(PeriodicGrid grid, std::vector<std::complex<double>> half);

    [[nodiscard]] const PeriodicGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] long min_mode() const noexcept { return -static_cast<long>(grid_.size() / 2); }
    [[nodiscard]] long max_mode() const noexcept { return static_cast<long>(grid_.size() / 2) - 1; }

    /// c_k for k in [-n/2, n/2 - 1].
    [[nodiscard]] std::complex<double> at(long k) const;

    /// Coefficients for k = 0..n/2 (index n/2 is the Nyquist mode).
    [[nodiscard]] const std::vector<std::complex<double>>& half() const noexcept { return half_; }
    [[nodiscard]] std::vector<std::complex<double>>& half() noexcept { return half_; }

private:
    PeriodicGrid grid_;
    std::vector<std::complex<double>> half_;
};

[[nodiscard]] Spectrum to_spectrum(const Field& f);
[[nodiscard]] Field from_spectrum(const Spectrum& s);

/// Periodic Hilbert transform as the multiplier -i sgn(k); modes 0 and Nyquist are zeroed.
[[nodiscard]] Field hilbert_spectral(const Field& f);

/// Spectral d/dx: multiplier i k, Nyquist zeroed.
[[nodiscard]] Field derivative(const Field& f);

/// Lambda^alpha with multiplier |k|^alpha. Throws InvalidAlpha unless 0 < alpha <= 2.
[[nodiscard]] Field fractional_laplacian(const Field& f, double alpha);

/// ||Lambda^s f||_{L^2} = (2 pi sum_k |k|^{2s} |c_k|^2)^{1/2}. Requires s >= 0.
[[nodiscard]] double hs_seminorm(const Field& f, double s);

/// Two-thirds rule: zero every mode with |k| > n/3.
[[nodiscard]] Field truncate_two_thirds(const Field& f);
void truncate_two_thirds(Spectrum& s);

}  // namespace aggdiff
