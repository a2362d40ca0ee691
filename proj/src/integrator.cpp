#include "aggdiff/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "aggdiff/errors.hpp"
#include "aggdiff/spectral.hpp"

namespace aggdiff {

void RkfConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw InvalidArgument("RKF tolerances must be positive");
    if (!(dt_min > 0.0 && dt_min <= dt_init && dt_init <= dt_max)) {
        throw InvalidArgument("RKF step bounds need 0 < dt_min <= dt_init <= dt_max");
    }
    if (!(safety > 0.0 && safety < 1.0)) throw InvalidArgument("RKF safety factor must lie in (0, 1)");
    if (max_steps == 0) throw InvalidArgument("RKF max_steps must be positive");
}

std::string_view to_string(StopReason r) noexcept {
    switch (r) {
        case StopReason::Completed: return "Completed";
        case StopReason::DtUnderflow: return "DtUnderflow";
        case StopReason::NonFinite: return "NonFinite";
        case StopReason::BlowupThreshold: return "BlowupThreshold";
        case StopReason::MaxSteps: return "MaxSteps";
    }
    return "?";
}

std::string_view to_string(IntegrationEvent::Kind k) noexcept {
    switch (k) {
        case IntegrationEvent::Kind::NegativeDensity: return "negative_density";
        case IntegrationEvent::Kind::DensityRecovered: return "density_recovered";
        case IntegrationEvent::Kind::Stop: return "stop";
    }
    return "?";
}

namespace {

// Fehlberg's embedded 4(5) pair.
constexpr std::array<double, 6> kNodes = {0.0, 1.0 / 4.0, 3.0 / 8.0, 12.0 / 13.0, 1.0, 1.0 / 2.0};
constexpr std::array<std::array<double, 5>, 6> kCoupling = {{
    {},
    {1.0 / 4.0},
    {3.0 / 32.0, 9.0 / 32.0},
    {1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0},
    {439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0},
    {-8.0 / 27.0, 2.0, -3544.0 / 2565.0, 1859.0 / 4104.0, -11.0 / 40.0},
}};
constexpr std::array<double, 6> kWeights4 = {25.0 / 216.0, 0.0, 1408.0 / 2565.0, 2197.0 / 4104.0, -1.0 / 5.0, 0.0};
constexpr std::array<double, 6> kWeights5 = {16.0 / 135.0,      0.0,          6656.0 / 12825.0,
                                             28561.0 / 56430.0, -9.0 / 50.0, 2.0 / 55.0};

void require_finite(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) throw NonFinite(std::string("non-finite value in ") + what);
    }
}

}  // namespace

RkfStep rkf45_step(const RhsFunction& f, std::span<const double> y, double t, double dt, const RkfConfig& cfg) {
    if (!(dt > 0.0)) throw InvalidArgument("rkf45_step needs dt > 0");
    const std::size_t n = y.size();
    std::array<State, 6> k;
    State stage(n);
    for (std::size_t s = 0; s < 6; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t r = 0; r < s; ++r) acc += kCoupling[s][r] * k[r][i];
            stage[i] = y[i] + dt * acc;
        }
        require_finite(stage, "RKF stage state");
        k[s] = f(t + kNodes[s] * dt, stage);
        if (k[s].size() != n) throw InvalidArgument("rhs returned a state of the wrong size");
        require_finite(k[s], "RKF stage derivative");
    }

    RkfStep out{State(n), State(n), 0.0};
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double inc4 = 0.0;
        double inc5 = 0.0;
        for (std::size_t s = 0; s < 6; ++s) {
            inc4 += kWeights4[s] * k[s][i];
            inc5 += kWeights5[s] * k[s][i];
        }
        out.y4[i] = y[i] + dt * inc4;
        out.y5[i] = y[i] + dt * inc5;
        const double w = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(out.y5[i]));
        const double e = (out.y5[i] - out.y4[i]) / w;
        sum += e * e;
    }
    out.err_est = n == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(n));
    if (!std::isfinite(out.err_est)) throw NonFinite("non-finite RKF error estimate");
    return out;
}

double adapt_dt(double err_est, double dt, const RkfConfig& cfg) {
    if (!(err_est >= 0.0)) throw InvalidArgument("adapt_dt needs a nonnegative error estimate");
    if (err_est == 0.0) return std::min(4.0 * dt, cfg.dt_max);
    double next = cfg.safety * dt * std::pow(err_est, -0.2);
    next = std::clamp(next, 0.25 * dt, 4.0 * dt);
    return std::clamp(next, cfg.dt_min, cfg.dt_max);
}

OdeResult integrate_ode(const RhsFunction& f, State y0, double t_end, const RkfConfig& cfg,
                        std::span<const double> sample_times, const AcceptHook& hook) {
    cfg.validate();
    if (!(t_end >= 0.0)) throw InvalidArgument("integration end time must be nonnegative");

    std::vector<double> targets;
    for (double s : sample_times) {
        if (s > 0.0 && s < t_end) targets.push_back(s);
    }
    targets.push_back(t_end);
    std::ranges::sort(targets);
    const auto dup = std::ranges::unique(targets);
    targets.erase(dup.begin(), dup.end());

    OdeResult res{std::move(y0), 0.0, StopReason::Completed, 0, 0, {}};
    if (t_end == 0.0) return res;

    std::size_t next_target = 0;
    double dt = std::min(cfg.dt_init, cfg.dt_max);
    while (true) {
        if (res.accepted_steps >= cfg.max_steps) {
            res.reason = StopReason::MaxSteps;
            res.detail = "reached max_steps = " + std::to_string(cfg.max_steps);
            return res;
        }
        const double target = targets[next_target];
        double dt_try = dt;
        bool lands = false;
        // Stretch by a hair rather than leave a sliver step before the target.
        if (res.t + dt_try * (1.0 + 1e-10) >= target) {
            dt_try = target - res.t;
            lands = true;
        }

        RkfStep step;
        try {
            step = rkf45_step(f, res.y, res.t, dt_try, cfg);
        } catch (const NonFinite& e) {
            res.reason = StopReason::NonFinite;
            res.detail = e.what();
            return res;
        }

        if (step.err_est <= 1.0) {
            res.t = lands ? target : res.t + dt_try;
            res.y = std::move(step.y5);
            ++res.accepted_steps;
            double dt_next = adapt_dt(step.err_est, dt_try, cfg);
            // A step clipped to a target says little about the attainable size.
            if (lands) dt_next = std::min(std::max(dt_next, dt), cfg.dt_max);
            const bool at_sample = lands;
            if (lands) ++next_target;
            if (hook) {
                const StepOutcome outcome{true, res.t, dt_try, step.err_est, dt_next};
                if (auto stop = hook(outcome, res.y, at_sample)) {
                    res.reason = *stop;
                    return res;
                }
            }
            if (next_target == targets.size()) {
                res.reason = StopReason::Completed;
                return res;
            }
            dt = dt_next;
        } else {
            ++res.rejected_steps;
            if (dt_try <= cfg.dt_min) {
                res.reason = StopReason::DtUnderflow;
                std::ostringstream msg;
                msg << "step rejected at dt_min = " << cfg.dt_min << " (t = " << res.t << ", err = " << step.err_est
                    << ")";
                res.detail = msg.str();
                return res;
            }
            dt = adapt_dt(step.err_est, dt_try, cfg);
        }
    }
}

IntegrationResult integrate(const RhsEvaluator& rhs, const Field& rho0, double t_end, const RkfConfig& cfg,
                            const IntegrationOptions& opts, const Observer& observer) {
    if (!(rho0.grid() == rhs.grid())) throw InvalidArgument("initial field and evaluator use different grids");
    const PeriodicGrid grid = rhs.grid();
    const double h = grid.spacing();

    IntegrationResult out{rho0, 0.0, StopReason::Completed, {}, 0, 0};
    std::size_t clamped_since_accept = 0;
    double min_since_accept = std::numeric_limits<double>::infinity();
    bool negative_episode = false;

    RhsFunction f = [&](double, std::span<const double> y) {
        RhsStats stats;
        State dy = std::move(rhs(Field(grid, State(y.begin(), y.end())), &stats)).release();
        clamped_since_accept = std::max(clamped_since_accept, stats.clamped_nodes);
        min_since_accept = std::min(min_since_accept, stats.min_density);
        return dy;
    };

    if (observer) observer(StepReport{0, 0.0, 0.0, rho0, true});

    Field current = rho0;
    AcceptHook hook = [&](const StepOutcome& step, std::span<const double> y,
                          bool at_sample) -> std::optional<StopReason> {
        current = Field(grid, State(y.begin(), y.end()));
        if (clamped_since_accept > 0 && !negative_episode) {
            std::ostringstream msg;
            msg << clamped_since_accept << " node(s) below zero (min " << min_since_accept
                << "); clamped to 0 for beta";
            out.events.push_back({IntegrationEvent::Kind::NegativeDensity, step.t_new, msg.str()});
            negative_episode = true;
        } else if (clamped_since_accept == 0 && negative_episode) {
            out.events.push_back({IntegrationEvent::Kind::DensityRecovered, step.t_new, "density nonnegative again"});
            negative_episode = false;
        }
        clamped_since_accept = 0;
        min_since_accept = std::numeric_limits<double>::infinity();

        const bool last = step.t_new >= t_end;
        if (observer) observer(StepReport{out.accepted_steps + 1, step.t_new, step.dt_used, current, at_sample || last});
        ++out.accepted_steps;

        const double grad = lp_norm(derivative(current), std::numeric_limits<double>::infinity());
        const double osc = max_value(current) - min_value(current);
        std::ostringstream msg;
        if (grad > opts.blowup.grad_threshold) {
            msg << "||d rho/dx||_inf = " << grad << " exceeds " << opts.blowup.grad_threshold;
        } else if (opts.blowup.cell_fraction > 0.0 && osc > 0.0 && grad * h > opts.blowup.cell_fraction * osc) {
            msg << "front unresolved: h * ||d rho/dx||_inf = " << grad * h << " exceeds " << opts.blowup.cell_fraction
                << " * oscillation " << osc;
        } else {
            return std::nullopt;
        }
        out.events.push_back({IntegrationEvent::Kind::Stop, step.t_new, msg.str()});
        return StopReason::BlowupThreshold;
    };

    OdeResult ode = integrate_ode(f, State(rho0.values().begin(), rho0.values().end()), t_end, cfg,
                                  opts.sample_times, hook);
    out.reason = ode.reason;
    out.t_final = ode.t;
    out.rejected_steps = ode.rejected_steps;
    out.final = current;
    if (!ode.detail.empty()) out.events.push_back({IntegrationEvent::Kind::Stop, ode.t, ode.detail});
    return out;
}

}  // namespace aggdiff
