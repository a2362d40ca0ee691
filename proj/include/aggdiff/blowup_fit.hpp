#pragma once

#include <span>
#include <vector>

namespace aggdiff {

struct FitSample {
    double t;
    double g;  ///< monitored quantity, e.g. ||d rho/dx||_inf
};

/// Parameters of g(t) ~ C / (T - t)^a.
struct BlowupFit {
    double C = 0.0;
    double T = 0.0;
    double a = 0.0;
    double residual = 0.0;  ///< RMS of log g - (log C - a log(T - t)) over the window
    std::size_t samples_used = 0;
};

struct FitOptions {
    /// Trailing fraction of the samples entering the fit.
    double window = 0.5;
    /// Points of the coarse profile scan over T.
    int scan_points = 400;
};

inline constexpr std::size_t kMinFitSamples = 8;

/// Least squares fit of log g = log C - a log(T - t). T is profiled over
/// (t_last, t_last + 2 (t_last - t_first)] with (log C, a) solved linearly
/// for each trial, then (C, T, a) are polished jointly by Gauss-Newton.
///
/// Throws InvalidArgument for fewer than kMinFitSamples samples, nonincreasing
/// times or nonpositive g, and FitDegenerate when the profile has no interior
/// minimum in T or the fitted C or a is not positive.
[[nodiscard]] BlowupFit blowup_fit(std::span<const FitSample> samples, const FitOptions& opts = {});

}  // namespace aggdiff
