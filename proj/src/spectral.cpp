#include "aggdiff/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aggdiff/errors.hpp"
#include "fft_plan_cache.hpp"

namespace aggdiff {

Spectrum::Spectrum(PeriodicGrid grid, std::vector<std::complex<double>> half)
    : grid_(grid), half_(std::move(half)) {
    if (half_.size() != grid_.size() / 2 + 1) {
        throw InvalidArgument("spectrum needs n/2 + 1 coefficients");
    }
}

std::complex<double> Spectrum::at(long k) const {
    if (k < min_mode() || k > max_mode()) {
        throw InvalidArgument("mode " + std::to_string(k) + " outside the resolved band");
    }
    if (k == min_mode()) return half_.back();
    if (k >= 0) return half_[static_cast<std::size_t>(k)];
    return std::conj(half_[static_cast<std::size_t>(-k)]);
}

Spectrum to_spectrum(const Field& f) {
    const std::size_t n = f.size();
    std::vector<std::complex<double>> half(n / 2 + 1);
    auto v = f.values();
    // A constant field has an exactly known spectrum; bypassing the FFT keeps
    // steady states free of round-off in every derived operator.
    if (std::ranges::all_of(v, [&](double x) { return x == v[0]; })) {
        half[0] = v[0];
        return Spectrum(f.grid(), std::move(half));
    }
    detail::fft_forward(v, half);
    // Nodes start at -pi, so c_k = (-1)^k F_k / n.
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < half.size(); ++k) {
        half[k] *= (k % 2 == 0 ? inv_n : -inv_n);
    }
    return Spectrum(f.grid(), std::move(half));
}

Field from_spectrum(const Spectrum& s) {
    const std::size_t n = s.grid().size();
    std::vector<std::complex<double>> half = s.half();
    for (std::size_t k = 1; k < half.size(); k += 2) half[k] = -half[k];
    std::vector<double> out(n);
    detail::fft_backward(half, out);
    return Field(s.grid(), std::move(out));
}

namespace {

template <class Multiplier>
Field apply_multiplier(const Field& f, Multiplier m) {
    Spectrum s = to_spectrum(f);
    auto& half = s.half();
    for (std::size_t k = 0; k < half.size(); ++k) half[k] *= m(static_cast<double>(k), k);
    return from_spectrum(s);
}

}  // namespace

Field hilbert_spectral(const Field& f) {
    const std::size_t nyquist = f.size() / 2;
    return apply_multiplier(f, [nyquist](double, std::size_t k) -> std::complex<double> {
        if (k == 0 || k == nyquist) return 0.0;
        return {0.0, -1.0};
    });
}

Field derivative(const Field& f) {
    const std::size_t nyquist = f.size() / 2;
    return apply_multiplier(f, [nyquist](double kd, std::size_t k) -> std::complex<double> {
        if (k == nyquist) return 0.0;
        return {0.0, kd};
    });
}

Field fractional_laplacian(const Field& f, double alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw InvalidAlpha("fractional order must lie in (0, 2], got " + std::to_string(alpha));
    }
    return apply_multiplier(f, [alpha](double kd, std::size_t) -> std::complex<double> {
        return kd == 0.0 ? 0.0 : std::pow(kd, alpha);
    });
}

double hs_seminorm(const Field& f, double s) {
    if (!(s >= 0.0)) throw InvalidArgument("hs_seminorm requires s >= 0");
    const Spectrum spec = to_spectrum(f);
    const auto& half = spec.half();
    const std::size_t nyquist = half.size() - 1;
    double sum = 0.0;
    for (std::size_t k = 1; k < half.size(); ++k) {
        const double weight = std::pow(static_cast<double>(k), 2.0 * s) * std::norm(half[k]);
        // Interior modes appear as +k and -k; Nyquist only once.
        sum += (k == nyquist ? 1.0 : 2.0) * weight;
    }
    if (s == 0.0) sum += std::norm(half[0]);
    return std::sqrt(2.0 * std::numbers::pi * sum);
}

void truncate_two_thirds(Spectrum& s) {
    const std::size_t cutoff = s.grid().size() / 3;
    auto& half = s.half();
    for (std::size_t k = cutoff + 1; k < half.size(); ++k) half[k] = 0.0;
}

Field truncate_two_thirds(const Field& f) {
    Spectrum s = to_spectrum(f);
    truncate_two_thirds(s);
    return from_spectrum(s);
}

}  // namespace aggdiff
