#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "aggdiff/errors.hpp"

namespace aggdiff {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    /// Total number of subintervals allowed, counting the initial partition.
    std::size_t max_intervals = 100000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t intervals = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15 tables).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
};

template <class F>
Segment gauss_kronrod_15(F& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double pair = f(centre - dx) + f(centre + dx);
        kronrod += kKronrodWeights[i] * pair;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration over [breakpoints.front(), breakpoints.back()].
/// Interior breakpoints seed the initial partition. The worst segment is bisected
/// until the summed error estimate meets the tolerance; throws QuadratureFailure
/// when the interval budget runs out first.
template <class F>
QuadratureResult integrate_adaptive(F&& f, std::span<const double> breakpoints,
                                    const QuadratureOptions& opts = {}) {
    if (breakpoints.size() < 2) throw InvalidArgument("quadrature needs at least two breakpoints");
    std::vector<detail::Segment> heap;
    heap.reserve(breakpoints.size() + 64);
    double value = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        heap.push_back(detail::gauss_kronrod_15(f, breakpoints[i], breakpoints[i + 1]));
        value += heap.back().value;
        error += heap.back().error;
    }
    auto by_error = [](const detail::Segment& l, const detail::Segment& r) { return l.error < r.error; };
    auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(value)); };
    if (error <= tolerance()) return {value, error, heap.size()};

    std::ranges::make_heap(heap, by_error);
    while (error > tolerance()) {
        if (heap.size() >= opts.max_intervals) {
            throw QuadratureFailure("adaptive quadrature did not converge within " +
                                    std::to_string(opts.max_intervals) + " intervals (error estimate " +
                                    std::to_string(error) + ")");
        }
        std::ranges::pop_heap(heap, by_error);
        const detail::Segment worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        const auto left = detail::gauss_kronrod_15(f, worst.a, mid);
        const auto right = detail::gauss_kronrod_15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push_back(left);
        std::ranges::push_heap(heap, by_error);
        heap.push_back(right);
        std::ranges::push_heap(heap, by_error);
    }
    // Re-sum to shed the drift of the incremental updates.
    value = 0.0;
    error = 0.0;
    for (const auto& s : heap) {
        value += s.value;
        error += s.error;
    }
    return {value, error, heap.size()};
}

template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
    const std::array<double, 2> ends{a, b};
    return integrate_adaptive(std::forward<F>(f), std::span<const double>(ends), opts);
}

}  // namespace aggdiff
