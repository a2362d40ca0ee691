#include "aggdiff/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "aggdiff/errors.hpp"
#include "aggdiff/spectral.hpp"

namespace aggdiff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

void require_nonnegative(const Field& rho0, const char* who) {
    if (min_value(rho0) < 0.0) throw InvalidArgument(std::string(who) + " needs a nonnegative density");
}

}  // namespace

TimeSeriesRecord record(const Field& rho, double t, double dt) {
    TimeSeriesRecord r;
    r.t = t;
    r.dt = dt;
    r.mass = 2.0 * std::numbers::pi * mean(rho);
    r.linf = lp_norm(rho, kInf);
    r.min_val = min_value(rho);
    r.grad_linf = lp_norm(derivative(rho), kInf);
    r.lambda_linf = lp_norm(fractional_laplacian(rho, 1.0), kInf);
    r.h_half = hs_seminorm(rho, 0.5);
    r.l2 = lp_norm(rho, 2.0);
    return r;
}

std::optional<double> theoretical_linf_bound(const Field& rho0, const BetaModel& m) {
    require_nonnegative(rho0, "theoretical_linf_bound");
    const double avg = mean(rho0);
    const double floor = std::max(max_value(rho0), 4.0 * avg);
    const double level = kFourPiSq * avg;

    double threshold = 0.0;  // least x with beta(x) >= level
    switch (m.kind()) {
        case BetaModel::Kind::Constant:
            if (m.parameter() < level) return std::nullopt;
            threshold = 0.0;
            break;
        case BetaModel::Kind::Linear:
            threshold = std::max(0.0, level - m.parameter());
            break;
        case BetaModel::Kind::Power:
            threshold = std::pow(level, 1.0 / m.parameter());
            break;
        case BetaModel::Kind::LogSmooth:
            threshold = std::expm1(level);
            break;
    }
    return std::max(floor, threshold);
}

std::optional<double> prop_max2_bound(const Field& rho0, const BetaModel& m, double nu, double R) {
    require_nonnegative(rho0, "prop_max2_bound");
    if (!(nu > 0.0) || !(R >= 0.0)) return std::nullopt;
    if (!(lp_norm(rho0, 1.0) < nu / (2.0 * std::numbers::pi))) return std::nullopt;
    // Every law is nondecreasing on [0, inf), so beta >= nu on [R, inf) iff beta(R) >= nu.
    // The slack absorbs rounding when R is itself computed from nu.
    if (m.eval(R) < nu * (1.0 - 1e-12)) return std::nullopt;
    return R;
}

std::optional<ExistenceMargin> global_existence_margin(const Field& rho0, const BetaModel& m, double nu,
                                                       double c_s) {
    if (!(c_s > 0.0)) throw InvalidArgument("Sobolev constant c_s must be positive");
    const auto bound = theoretical_linf_bound(rho0, m);
    if (!bound) return std::nullopt;

    ExistenceMargin out;
    out.x = hs_seminorm(rho0, 2.0);
    out.linf_bound = *bound;
    out.beta_sup = beta_sup_constants(m, *bound);
    out.margin = mean(rho0) - nu;
    if (out.x > 0.0) {
        const double x = out.x;
        const auto& c = out.beta_sup;
        const double pi_sq = std::numbers::pi * std::numbers::pi;
        // Zero suprema stay zero even when X is large.
        if (c[3] != 0.0) out.margin += c[3] * c_s * c_s * c_s * x * x * x;
        if (c[2] != 0.0) out.margin += (24.0 + pi_sq / 2.0) * c_s * c_s * c[2] * x * x;
        out.margin += (12.5 * c_s + 33.0 * c_s * c[1]) * x;
    }
    return out;
}

EnergyReport energy(const Field& rho, double lambda) {
    const double top = max_value(rho);
    if (!(lambda > lp_norm(rho, kInf))) throw LambdaTooSmall("energy needs lambda > ||rho||_inf");
    EnergyReport r;
    r.lambda = lambda;
    const double l2 = lp_norm(rho, 2.0);
    const double curv = hs_seminorm(rho, 2.0);
    r.h2_norm = std::sqrt(l2 * l2 + curv * curv);
    r.d_linf = 1.0 / (lambda - top);
    r.energy = r.h2_norm + r.d_linf;
    return r;
}

double default_energy_lambda(const Field& rho0, const Field& rho) {
    return 2.0 * std::max(lp_norm(rho0, kInf), lp_norm(rho, kInf));
}

double lambda_lemma_gap(const Field& rho) {
    const auto v = rho.values();
    const auto j = static_cast<std::size_t>(std::ranges::max_element(v) - v.begin());
    const double avg = mean(rho);
    if (!(avg > 0.0)) throw InvalidArgument("lambda_lemma_gap needs a positive mean");
    return fractional_laplacian(rho, 1.0)[j] - v[j] * v[j] / (kFourPiSq * avg);
}

}  // namespace aggdiff
