#include "aggdiff/rhs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aggdiff/errors.hpp"
#include "aggdiff/hilbert_quadrature.hpp"
#include "aggdiff/spectral.hpp"

namespace aggdiff {

HilbertBackend parse_hilbert_backend(std::string_view text) {
    if (text == "spectral") return HilbertBackend::Spectral;
    if (text == "quadrature") return HilbertBackend::Quadrature;
    throw InvalidArgument("unknown Hilbert backend '" + std::string(text) + "' (spectral|quadrature)");
}

PoissonBackend parse_poisson_backend(std::string_view text) {
    if (text == "spectral") return PoissonBackend::Spectral;
    if (text == "fd") return PoissonBackend::FiniteDifference;
    throw InvalidArgument("unknown Poisson backend '" + std::string(text) + "' (spectral|fd)");
}

std::string_view to_string(HilbertBackend b) noexcept {
    return b == HilbertBackend::Spectral ? "spectral" : "quadrature";
}

std::string_view to_string(PoissonBackend b) noexcept {
    return b == PoissonBackend::Spectral ? "spectral" : "fd";
}

RhsEvaluator::RhsEvaluator(PeriodicGrid grid, BetaModel beta, HilbertBackend hilbert, PoissonBackend poisson)
    : RhsEvaluator(grid, beta, hilbert, poisson, default_dealias(beta)) {}

RhsEvaluator::RhsEvaluator(PeriodicGrid grid, BetaModel beta, HilbertBackend hilbert, PoissonBackend poisson,
                           bool dealias)
    : grid_(grid), beta_(beta), hilbert_(hilbert), poisson_(poisson), dealias_(dealias) {}

bool RhsEvaluator::default_dealias(const BetaModel& beta) noexcept {
    return beta.kind() != BetaModel::Kind::Constant;
}

Field RhsEvaluator::operator()(const Field& rho, RhsStats* stats) const {
    if (!(rho.grid() == grid_)) throw InvalidArgument("rhs evaluated on a field from another grid");

    const Field density = dealias_ ? truncate_two_thirds(rho) : rho;
    Field hilbert = hilbert_ == HilbertBackend::Spectral ? hilbert_spectral(density) : hilbert_quadrature(density);
    Field velocity = solve_poisson(density, poisson_).grad_v;
    if (dealias_) {
        // The spectral transforms of a truncated field stay truncated already.
        if (hilbert_ != HilbertBackend::Spectral) hilbert = truncate_two_thirds(hilbert);
        if (poisson_ != PoissonBackend::Spectral) velocity = truncate_two_thirds(velocity);
    }

    const std::size_t n = grid_.size();
    std::vector<double> flux(n);
    std::size_t clamped = 0;
    double min_density = density[0];
    for (std::size_t j = 0; j < n; ++j) {
        const double r = density[j];
        min_density = std::min(min_density, r);
        if (r < 0.0) ++clamped;
        const double b = beta_.eval(std::max(r, 0.0));
        flux[j] = -b * hilbert[j] + r * velocity[j];
    }
    if (stats != nullptr) {
        stats->clamped_nodes = clamped;
        stats->min_density = min_density;
    }

    // Field construction throws NonFinite on NaN/Inf.
    Field q(grid_, std::move(flux));
    if (dealias_) q = truncate_two_thirds(q);
    return derivative(q);
}

}  // namespace aggdiff
