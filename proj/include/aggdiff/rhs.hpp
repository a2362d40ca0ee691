#pragma once

#include <cstddef>
#include <string_view>

#include "aggdiff/beta_model.hpp"
#include "aggdiff/grid.hpp"
#include "aggdiff/poisson.hpp"

namespace aggdiff {

enum class HilbertBackend { Spectral, Quadrature };

[[nodiscard]] HilbertBackend parse_hilbert_backend(std::string_view text);
[[nodiscard]] PoissonBackend parse_poisson_backend(std::string_view text);
[[nodiscard]] std::string_view to_string(HilbertBackend b) noexcept;
[[nodiscard]] std::string_view to_string(PoissonBackend b) noexcept;

/// Per-evaluation bookkeeping filled in by RhsEvaluator.
struct RhsStats {
    /// Nodes where rho < 0 had to be clamped to 0 before evaluating beta.
    std::size_t clamped_nodes = 0;
    double min_density = 0.0;
};

/// Semi-discrete right-hand side F(rho) = d/dx( -beta(rho) H rho + rho dv/dx ),
/// d^2v/dx^2 = rho - <rho>. The flux is assembled nodewise and differentiated
/// once spectrally, so the zero mode of F vanishes identically.
class RhsEvaluator {
public:
    RhsEvaluator(PeriodicGrid grid, BetaModel beta, HilbertBackend hilbert = HilbertBackend::Spectral,
                 PoissonBackend poisson = PoissonBackend::Spectral);
    RhsEvaluator(PeriodicGrid grid, BetaModel beta, HilbertBackend hilbert, PoissonBackend poisson, bool dealias);

    /// Two-thirds dealiasing is on for every law except Constant.
    [[nodiscard]] static bool default_dealias(const BetaModel& beta) noexcept;

    /// Throws NonFinite if any intermediate is NaN or Inf.
    [[nodiscard]] Field operator()(const Field& rho, RhsStats* stats = nullptr) const;

    [[nodiscard]] const PeriodicGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] const BetaModel& beta() const noexcept { return beta_; }
    [[nodiscard]] HilbertBackend hilbert_backend() const noexcept { return hilbert_; }
    [[nodiscard]] PoissonBackend poisson_backend() const noexcept { return poisson_; }
    [[nodiscard]] bool dealias() const noexcept { return dealias_; }

private:
    PeriodicGrid grid_;
    BetaModel beta_;
    HilbertBackend hilbert_;
    PoissonBackend poisson_;
    bool dealias_;
};

}  // namespace aggdiff
