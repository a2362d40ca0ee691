#pragma once

#include <array>
#include <optional>

#include "aggdiff/beta_model.hpp"
#include "aggdiff/grid.hpp"

namespace aggdiff {

/// One row of the monitored time series.
struct TimeSeriesRecord {
    double t = 0.0;
    double mass = 0.0;  ///< 2 pi <rho>
    double linf = 0.0;
    double min_val = 0.0;
    double grad_linf = 0.0;    ///< ||d rho/dx||_inf
    double lambda_linf = 0.0;  ///< ||Lambda rho||_inf
    double h_half = 0.0;       ///< ||Lambda^(1/2) rho||_{L^2}
    double l2 = 0.0;
    double dt = 0.0;

    friend bool operator==(const TimeSeriesRecord&, const TimeSeriesRecord&) = default;
};

[[nodiscard]] TimeSeriesRecord record(const Field& rho, double t, double dt);

/// Max principle level: the least alpha >= max(||rho0||_inf, 4<rho0>) with
/// beta(alpha) >= 4 pi^2 <rho0>. nullopt when beta never reaches that level.
[[nodiscard]] std::optional<double> theoretical_linf_bound(const Field& rho0, const BetaModel& m);

/// Returns R when ||rho0||_{L^1} < nu / (2 pi) and beta(x) >= nu for every x >= R,
/// nullopt otherwise. The operative bound on ||rho(t)||_inf is then max(R, ||rho0||_inf).
[[nodiscard]] std::optional<double> prop_max2_bound(const Field& rho0, const BetaModel& m, double nu, double R);

/// Coefficients of the decay polynomial in X = ||d^2 rho0/dx^2||_{L^2}:
///   C3 c^3 X^3 + (24 + pi^2/2) c^2 C2 X^2 + (25 c/2 + 33 c C1) X + <rho0> - nu.
struct ExistenceMargin {
    double x = 0.0;          ///< ||d^2 rho0/dx^2||_{L^2}
    double linf_bound = 0.0; ///< level at which the beta suprema were taken
    std::array<double, 4> beta_sup{};
    double margin = 0.0;     ///< negative means the decay condition holds at t = 0
};

/// nullopt when theoretical_linf_bound is unbounded. Requires c_s > 0.
[[nodiscard]] std::optional<ExistenceMargin> global_existence_margin(const Field& rho0, const BetaModel& m,
                                                                     double nu, double c_s);

struct EnergyReport {
    double lambda = 0.0;
    double h2_norm = 0.0;
    double d_linf = 0.0;  ///< max_j 1 / (lambda - rho_j)
    double energy = 0.0;
};

/// Throws LambdaTooSmall unless lambda > ||rho||_inf.
[[nodiscard]] EnergyReport energy(const Field& rho, double lambda);

/// 2 max(||rho0||_inf, ||rho||_inf).
[[nodiscard]] double default_energy_lambda(const Field& rho0, const Field& rho);

/// (Lambda rho)(x*) - rho(x*)^2 / (4 pi^2 <rho>) at the discrete argmax x*.
/// Nonnegative whenever max rho >= 4 <rho> for rho >= 0.
[[nodiscard]] double lambda_lemma_gap(const Field& rho);

}  // namespace aggdiff
