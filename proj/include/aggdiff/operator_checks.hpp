#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "aggdiff/grid.hpp"

namespace aggdiff {

/// Random real trigonometric polynomial with modes 1..bandwidth (plus the given mean),
/// coefficients uniform in [-1, 1] scaled by 1/k.
[[nodiscard]] Field random_band_limited(const PeriodicGrid& grid, int bandwidth, std::mt19937_64& rng,
                                        double mean_value = 0.0);

/// One measured identity. Passing means lower <= measured <= upper.
struct IdentityCheck {
    std::string name;
    double measured;
    double lower;
    double upper;

    [[nodiscard]] bool passed() const noexcept { return measured >= lower && measured <= upper; }
};

struct OperatorCheckOptions {
    std::size_t n = 256;
    int random_fields = 100;
    /// Random fields run through the (slower) quadrature backend.
    int quadrature_fields = 4;
    std::uint64_t seed = 20240601;
};

[[nodiscard]] IdentityCheck check_calderon(const OperatorCheckOptions& opts);
[[nodiscard]] IdentityCheck check_tricomi(const OperatorCheckOptions& opts);
[[nodiscard]] IdentityCheck check_anti_self_adjoint(const OperatorCheckOptions& opts);
/// max of |Lambda f - H f'|, |Lambda f - (H f)'| and |Lambda^2 f + f''|.
[[nodiscard]] IdentityCheck check_composition(const OperatorCheckOptions& opts);
/// min_j (2 g Lambda g - Lambda(g^2))_j / ||g||_inf^2 over random positive g.
[[nodiscard]] IdentityCheck check_cordoba(const OperatorCheckOptions& opts);
/// L-inf gap between the quadrature and spectral Hilbert transforms on bandwidth <= 32 fields.
[[nodiscard]] IdentityCheck check_hilbert_backends(const OperatorCheckOptions& opts);
/// Same gap on the normalized bump.
[[nodiscard]] IdentityCheck check_hilbert_backends_bump(const OperatorCheckOptions& opts);
/// Observed order of the finite-difference Poisson gradient over n, 2n, 4n.
[[nodiscard]] IdentityCheck check_poisson_fd_order(const OperatorCheckOptions& opts);

/// Every check above, in a fixed order.
[[nodiscard]] std::vector<IdentityCheck> run_operator_checks(const OperatorCheckOptions& opts = {});

}  // namespace aggdiff
