#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aggdiff/grid.hpp"
#include "aggdiff/rhs.hpp"

namespace aggdiff {

struct RkfConfig {
    double abs_tol = 1e-8;
    double rel_tol = 1e-8;
    double dt_init = 1e-4;
    double dt_min = 1e-12;
    double dt_max = 1e-2;
    double safety = 0.9;
    std::size_t max_steps = 1'000'000;

    /// Throws InvalidArgument unless 0 < dt_min <= dt_init <= dt_max,
    /// tolerances > 0 and safety in (0, 1).
    void validate() const;
};

struct StepOutcome {
    bool accepted = false;
    double t_new = 0.0;
    double dt_used = 0.0;
    double err_est = 0.0;  ///< weighted RMS error; accepted iff <= 1
    double dt_next = 0.0;
};

enum class StopReason { Completed, DtUnderflow, NonFinite, BlowupThreshold, MaxSteps };

[[nodiscard]] std::string_view to_string(StopReason r) noexcept;

/// True for the outcomes that signal a singularity rather than a finished run.
[[nodiscard]] constexpr bool is_blowup_stop(StopReason r) noexcept {
    return r == StopReason::DtUnderflow || r == StopReason::BlowupThreshold || r == StopReason::NonFinite;
}

using State = std::vector<double>;
using RhsFunction = std::function<State(double t, std::span<const double> y)>;

struct RkfStep {
    State y4;
    State y5;
    double err_est = 0.0;
};

/// One Fehlberg 4(5) step. The error estimate is the RMS over components of
/// (y5 - y4) / (abs_tol + rel_tol * max(|y|, |y5|)).
/// Throws NonFinite if a stage or the estimate is NaN/Inf.
[[nodiscard]] RkfStep rkf45_step(const RhsFunction& f, std::span<const double> y, double t, double dt,
                                 const RkfConfig& cfg);

/// clamp(safety * dt * err^(-1/5), dt/4, 4 dt), then clamped to [dt_min, dt_max].
/// err == 0 gives min(4 dt, dt_max).
[[nodiscard]] double adapt_dt(double err_est, double dt, const RkfConfig& cfg);

/// Called after every accepted step; returning a reason stops the integration.
using AcceptHook =
    std::function<std::optional<StopReason>(const StepOutcome& step, std::span<const double> y, bool at_sample)>;

struct OdeResult {
    State y;
    double t = 0.0;
    StopReason reason = StopReason::Completed;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    std::string detail;
};

/// Adaptive RKF45 from t = 0 to t_end with local extrapolation (the fifth-order
/// solution propagates). Steps are shortened to land exactly on each entry of
/// `sample_times` inside (0, t_end) and on t_end itself.
[[nodiscard]] OdeResult integrate_ode(const RhsFunction& f, State y0, double t_end, const RkfConfig& cfg,
                                      std::span<const double> sample_times = {}, const AcceptHook& hook = {});

/// Discrete stand-ins for loss of regularity.
struct BlowupCriteria {
    /// Stop once ||d rho/dx||_inf exceeds this.
    double grad_threshold = 1e6;
    /// Stop once h * ||d rho/dx||_inf exceeds this fraction of (max rho - min rho),
    /// i.e. the steepest front is no longer resolved by the grid. 0 disables.
    double cell_fraction = 0.08;
};

struct IntegrationEvent {
    enum class Kind { NegativeDensity, DensityRecovered, Stop };
    Kind kind;
    double t;
    std::string message;
};

[[nodiscard]] std::string_view to_string(IntegrationEvent::Kind k) noexcept;

struct StepReport {
    std::size_t step;  ///< 0 for the initial state
    double t;
    double dt;  ///< step that produced this state; 0 for the initial state
    const Field& rho;
    bool at_sample;  ///< t is one of the requested sample times (or 0 / t_end)
};

using Observer = std::function<void(const StepReport&)>;

struct IntegrationOptions {
    BlowupCriteria blowup;
    std::vector<double> sample_times;
};

struct IntegrationResult {
    Field final;
    double t_final = 0.0;
    StopReason reason = StopReason::Completed;
    std::vector<IntegrationEvent> events;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

/// Method-of-lines integration of the aggregation-diffusion system. The observer
/// sees the initial state and every accepted step. Failures are reported through
/// the stop reason, never thrown.
[[nodiscard]] IntegrationResult integrate(const RhsEvaluator& rhs, const Field& rho0, double t_end,
                                          const RkfConfig& cfg, const IntegrationOptions& opts = {},
                                          const Observer& observer = {});

}  // namespace aggdiff
