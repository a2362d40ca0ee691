#pragma once

#include "aggdiff/grid.hpp"

namespace aggdiff {

/// Solution of d^2 v / dx^2 = rho - <rho> on the torus, gauge <v> = 0.
struct PoissonSolution {
    Field grad_v;  ///< dv/dx, the attraction velocity
    Field v;
};

enum class PoissonBackend { Spectral, FiniteDifference };

/// v_k = -rho_k / k^2 (k != 0), grad_v = derivative(v).
[[nodiscard]] PoissonSolution solve_poisson_spectral(const Field& rho);

/// Second-order central differences for both the Laplacian and the gradient.
/// Throws SingularSystem if the right-hand side fails the compatibility condition.
[[nodiscard]] PoissonSolution solve_poisson_fd(const Field& rho);

[[nodiscard]] PoissonSolution solve_poisson(const Field& rho, PoissonBackend backend);

}  // namespace aggdiff
