#include "aggdiff/operator_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "aggdiff/errors.hpp"
#include "aggdiff/hilbert_quadrature.hpp"
#include "aggdiff/initial_data.hpp"
#include "aggdiff/poisson.hpp"
#include "aggdiff/spectral.hpp"

namespace aggdiff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_abs_diff(const Field& a, const Field& b) { return lp_norm(a - b, kInf); }

double inner(const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return a.grid().spacing() * s;
}

}  // namespace

Field random_band_limited(const PeriodicGrid& grid, int bandwidth, std::mt19937_64& rng, double mean_value) {
    if (bandwidth < 1 || static_cast<std::size_t>(bandwidth) >= grid.size() / 2) {
        throw InvalidArgument("bandwidth must lie in [1, n/2)");
    }
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::vector<double> a(bandwidth + 1), b(bandwidth + 1);
    for (int k = 1; k <= bandwidth; ++k) {
        a[k] = coeff(rng) / k;
        b[k] = coeff(rng) / k;
    }
    return Field::sample(grid, [&](double x) {
        double v = mean_value;
        for (int k = 1; k <= bandwidth; ++k) v += a[k] * std::cos(k * x) + b[k] * std::sin(k * x);
        return v;
    });
}

IdentityCheck check_calderon(const OperatorCheckOptions& opts) {
    const PeriodicGrid grid(opts.n);
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> offset(-2.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < opts.random_fields; ++i) {
        const Field g = random_band_limited(grid, static_cast<int>(opts.n / 4), rng, offset(rng));
        const double lhs = std::pow(lp_norm(hilbert_spectral(g), 2.0), 2) / (2.0 * std::numbers::pi);
        const double m = mean(g);
        const double rhs = std::pow(lp_norm(g, 2.0), 2) / (2.0 * std::numbers::pi) - m * m;
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    return {"calderon (relative)", worst, 0.0, 1e-10};
}

IdentityCheck check_tricomi(const OperatorCheckOptions& opts) {
    const PeriodicGrid grid(opts.n);
    std::mt19937_64 rng(opts.seed + 1);
    // A mode at exactly n/4 squares onto the Nyquist mode, which H discards.
    const int band = static_cast<int>(opts.n / 4) - 1;
    double worst = 0.0;
    for (int i = 0; i < opts.random_fields; ++i) {
        const Field f = random_band_limited(grid, band, rng);
        const Field hf = hilbert_spectral(f);
        const Field lhs = 2.0 * hilbert_spectral(f * hf);
        const Field rhs = hf * hf - f * f;
        worst = std::max(worst, max_abs_diff(lhs, rhs));
    }
    return {"tricomi (nodewise)", worst, 0.0, 1e-8};
}

IdentityCheck check_anti_self_adjoint(const OperatorCheckOptions& opts) {
    const PeriodicGrid grid(opts.n);
    std::mt19937_64 rng(opts.seed + 2);
    double worst = 0.0;
    for (int i = 0; i < opts.random_fields; ++i) {
        const Field f = random_band_limited(grid, static_cast<int>(opts.n / 4), rng, 0.5);
        const Field g = random_band_limited(grid, static_cast<int>(opts.n / 4), rng, -0.25);
        worst = std::max(worst, std::abs(inner(f, hilbert_spectral(g)) + inner(g, hilbert_spectral(f))));
    }
    return {"anti-self-adjointness", worst, 0.0, 1e-10};
}

IdentityCheck check_composition(const OperatorCheckOptions& opts) {
    const PeriodicGrid grid(opts.n);
    std::mt19937_64 rng(opts.seed + 3);
    double worst = 0.0;
    for (int i = 0; i < opts.random_fields; ++i) {
        const Field f = random_band_limited(grid, static_cast<int>(opts.n / 4), rng, 1.0);
        const Field lam = fractional_laplacian(f, 1.0);
        worst = std::max(worst, max_abs_diff(lam, hilbert_spectral(derivative(f))));
        worst = std::max(worst, max_abs_diff(lam, derivative(hilbert_spectral(f))));
        worst = std::max(worst, max_abs_diff(fractional_laplacian(f, 2.0), -1.0 * derivative(derivative(f))));
    }
    return {"composition Lambda = H d/dx = d/dx H", worst, 0.0, 1e-10};
}

IdentityCheck check_cordoba(const OperatorCheckOptions& opts) {
    const PeriodicGrid grid(opts.n);
    std::mt19937_64 rng(opts.seed + 4);
    // Bandwidth n/6 keeps g^2 free of aliasing.
    const int band = static_cast<int>(opts.n / 6);
    double worst = kInf;
    for (int i = 0; i < opts.random_fields; ++i) {
        Field g = random_band_limited(grid, band, rng);
        const double lift = 0.1 - min_value(g);
        g = g + Field(grid, std::vector<double>(grid.size(), lift));
        const Field gap = 2.0 * (g * fractional_laplacian(g, 1.0)) - fractional_laplacian(g * g, 1.0);
        const double scale = std::pow(lp_norm(g, kInf), 2);
        worst = std::min(worst, min_value(gap) / scale);
    }
    return {"cordoba 2g Lambda g - Lambda g^2 (min / ||g||^2)", worst, -1e-8, kInf};
}

IdentityCheck check_hilbert_backends(const OperatorCheckOptions& opts) {
    const PeriodicGrid grid(opts.n);
    std::mt19937_64 rng(opts.seed + 5);
    double worst = 0.0;
    for (int i = 0; i < opts.quadrature_fields; ++i) {
        const Field f = random_band_limited(grid, 32, rng, 1.0);
        worst = std::max(worst, max_abs_diff(hilbert_quadrature(f), hilbert_spectral(f)));
    }
    return {"hilbert quadrature vs spectral (bandwidth 32)", worst, 0.0, 1e-6};
}

IdentityCheck check_hilbert_backends_bump(const OperatorCheckOptions& opts) {
    const Field bump = build_initial_bump(PeriodicGrid(opts.n));
    return {"hilbert quadrature vs spectral (bump)", max_abs_diff(hilbert_quadrature(bump), hilbert_spectral(bump)),
            0.0, 1e-6};
}

IdentityCheck check_poisson_fd_order(const OperatorCheckOptions& opts) {
    auto error_at = [](std::size_t n) {
        const PeriodicGrid grid(n);
        const Field rho = Field::sample(grid, [](double x) { return 1.0 + std::cos(x) + 0.5 * std::sin(2.0 * x); });
        return max_abs_diff(solve_poisson_fd(rho).grad_v, solve_poisson_spectral(rho).grad_v);
    };
    const std::size_t n0 = std::max<std::size_t>(opts.n / 4, PeriodicGrid::kMinNodes);
    const double e0 = error_at(n0);
    const double e1 = error_at(2 * n0);
    const double e2 = error_at(4 * n0);
    // Worst of the two successive rates is the one reported.
    const double r1 = std::log2(e0 / e1);
    const double r2 = std::log2(e1 / e2);
    const double rate = std::abs(r1 - 2.0) > std::abs(r2 - 2.0) ? r1 : r2;
    return {"poisson fd observed order", rate, 1.8, 2.2};
}

std::vector<IdentityCheck> run_operator_checks(const OperatorCheckOptions& opts) {
    return {check_calderon(opts),         check_tricomi(opts),          check_anti_self_adjoint(opts),
            check_composition(opts),      check_cordoba(opts),          check_hilbert_backends(opts),
            check_hilbert_backends_bump(opts), check_poisson_fd_order(opts)};
}

}  // namespace aggdiff
