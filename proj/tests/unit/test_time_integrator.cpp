#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "aggdiff/errors.hpp"
#include "aggdiff/initial_data.hpp"
#include "aggdiff/integrator.hpp"
#include "aggdiff/rhs.hpp"
#include "aggdiff/spectral.hpp"

using namespace aggdiff;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

State decay(double, std::span<const double> y) {
    State out(y.begin(), y.end());
    for (double& v : out) v = -v;
    return out;
}

RkfConfig tol(double t) {
    RkfConfig c;
    c.abs_tol = t;
    c.rel_tol = t;
    return c;
}

}  // namespace

TEST_CASE("one RKF45 step of y' = -y with dt = 0.1") {
    const State y0{1.0};
    const auto s = rkf45_step(decay, y0, 0.0, 0.1, RkfConfig{});
    CHECK(std::abs(s.y5[0] - std::exp(-0.1)) <= 1e-8);
    CHECK(std::abs(s.y4[0] - std::exp(-0.1)) <= 1e-6);
    CHECK(s.err_est > 0.0);
}

TEST_CASE("tightening the tolerance never increases the error on y' = -y") {
    double prev = kInf;
    for (double t : {1e-4, 1e-6, 1e-8, 1e-10}) {
        const auto r = integrate_ode(decay, State{1.0}, 1.0, tol(t));
        REQUIRE(r.reason == StopReason::Completed);
        const double err = std::abs(r.y[0] - std::exp(-1.0));
        CHECK(err <= prev);
        prev = err;
    }
    CHECK(prev <= 1e-9);
}

TEST_CASE("f = 0 leaves the state bitwise unchanged") {
    const State y0{0.1, -3.0, 1e-300, 7.5};
    const auto r = integrate_ode([](double, std::span<const double> y) { return State(y.size(), 0.0); }, y0, 1.0,
                                 RkfConfig{});
    CHECK(r.reason == StopReason::Completed);
    CHECK(r.t == 1.0);
    CHECK(r.y == y0);
}

TEST_CASE("adapt_dt") {
    RkfConfig c;
    CHECK(adapt_dt(0.0, 1e-3, c) == 4e-3);
    CHECK(adapt_dt(0.0, 5e-3, c) == c.dt_max);
    CHECK(adapt_dt(1.0, 1e-3, c) == doctest::Approx(0.9e-3));
    CHECK(adapt_dt(1e10, 1e-3, c) == 0.25e-3);
    CHECK(adapt_dt(1e10, 2e-12, c) == c.dt_min);
    CHECK(adapt_dt(std::pow(0.9 / 2.0, 5.0), 1e-3, c) == doctest::Approx(2e-3));
}

TEST_CASE("RkfConfig::validate") {
    CHECK_NOTHROW(RkfConfig{}.validate());
    RkfConfig c;
    c.abs_tol = 0.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = RkfConfig{};
    c.dt_min = 1.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = RkfConfig{};
    c.dt_init = 1.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = RkfConfig{};
    c.safety = 1.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("steps land exactly on sample times and t_end") {
    const std::vector<double> samples{0.013, 0.25, 0.5, 0.77};
    std::vector<double> hit;
    const auto r = integrate_ode(decay, State{1.0}, 0.9, RkfConfig{}, samples,
                                 [&](const StepOutcome& s, std::span<const double>, bool at) -> std::optional<StopReason> {
                                     CHECK(s.err_est <= 1.0);
                                     if (at) hit.push_back(s.t_new);
                                     return std::nullopt;
                                 });
    CHECK(r.reason == StopReason::Completed);
    CHECK(r.t == 0.9);
    CHECK(hit == std::vector<double>{0.013, 0.25, 0.5, 0.77, 0.9});
}

TEST_CASE("the hook can stop the integration") {
    const auto r = integrate_ode(decay, State{1.0}, 1.0, RkfConfig{}, {},
                                 [](const StepOutcome& s, std::span<const double>, bool) -> std::optional<StopReason> {
                                     if (s.t_new > 0.1) return StopReason::BlowupThreshold;
                                     return std::nullopt;
                                 });
    CHECK(r.reason == StopReason::BlowupThreshold);
    CHECK(r.t > 0.1);
    CHECK(r.t < 1.0);
}

TEST_CASE("max_steps") {
    RkfConfig c;
    c.max_steps = 5;
    c.dt_max = 1e-3;
    const auto r = integrate_ode(decay, State{1.0}, 1.0, c);
    CHECK(r.reason == StopReason::MaxSteps);
    CHECK(r.accepted_steps + r.rejected_steps == 5);
}

TEST_CASE("y' = y^2 from y = 1 ends in DtUnderflow or NonFinite before t = 1") {
    const auto r = integrate_ode(
        [](double, std::span<const double> y) { return State{y[0] * y[0]}; }, State{1.0}, 2.0, RkfConfig{});
    CHECK((r.reason == StopReason::DtUnderflow || r.reason == StopReason::NonFinite));
    CHECK(r.t < 1.0);
    CHECK(r.t > 0.99);
}

TEST_CASE("t_end = 0 returns the initial state") {
    const auto r = integrate_ode(decay, State{2.0}, 0.0, RkfConfig{});
    CHECK(r.reason == StopReason::Completed);
    CHECK(r.accepted_steps == 0);
    CHECK(r.y == State{2.0});
}

TEST_CASE("strong constant diffusion decays toward the mean and conserves mass") {
    const PeriodicGrid g(64);
    const RhsEvaluator rhs(g, BetaModel::constant(5.0));
    const Field rho0 = Field::sample(g, [](double x) { return 1.0 + 0.5 * std::cos(x) + 0.2 * std::sin(3 * x); });
    std::vector<double> dev;
    double drift = 0.0;
    const auto r = integrate(rhs, rho0, 1.0, RkfConfig{}, {}, [&](const StepReport& s) {
        dev.push_back(lp_norm(s.rho - Field(g, std::vector<double>(g.size(), 1.0)), kInf));
        drift = std::max(drift, std::abs(mean(s.rho) - mean(rho0)));
    });
    CHECK(r.reason == StopReason::Completed);
    for (std::size_t i = 1; i < dev.size(); ++i) CHECK(dev[i] <= dev[i - 1] * (1.0 + 1e-12));
    // Linearized decay of the k = 1 mode is exp(-(5 - <rho>) t).
    CHECK(dev.back() <= 0.55 * std::exp(-4.0));
    CHECK(dev.back() >= 0.45 * std::exp(-4.0));
    CHECK(drift <= 1e-10);
}

TEST_CASE("a constant density is a steady state") {
    const PeriodicGrid g(128);
    const Field c(g, std::vector<double>(g.size(), 1.0));
    for (const auto& b : {BetaModel::power(2.0), BetaModel::log_smooth(), BetaModel::constant(1.0)}) {
        const auto r = integrate(RhsEvaluator(g, b), c, 1.0, RkfConfig{});
        CHECK(r.reason == StopReason::Completed);
        CHECK(lp_norm(r.final - c, kInf) <= 1e-12);
    }
}

TEST_CASE("observer sees the initial state and every accepted step") {
    const PeriodicGrid g(64);
    const Field rho0 = Field::sample(g, [](double x) { return 1.0 + 0.1 * std::cos(x); });
    IntegrationOptions opts;
    opts.sample_times = {0.05, 0.1};
    std::size_t calls = 0;
    std::size_t samples = 0;
    double last_t = -1.0;
    const auto r = integrate(RhsEvaluator(g, BetaModel::log_smooth()), rho0, 0.2, RkfConfig{}, opts,
                             [&](const StepReport& s) {
                                 if (calls == 0) {
                                     CHECK(s.step == 0);
                                     CHECK(s.t == 0.0);
                                 }
                                 CHECK(s.t > last_t);
                                 last_t = s.t;
                                 ++calls;
                                 if (s.at_sample) ++samples;
                             });
    CHECK(calls == r.accepted_steps + 1);
    CHECK(samples == 4);
    CHECK(r.t_final == 0.2);
}

TEST_CASE("negative densities raise an event") {
    const PeriodicGrid g(64);
    // A thin dip below zero that strong diffusion fills in.
    const Field rho0 = Field::sample(g, [](double x) { return 1.0 - 1.05 * std::exp(-x * x * 4.0); });
    IntegrationOptions opts;
    opts.blowup.cell_fraction = 0.0;
    const auto r = integrate(RhsEvaluator(g, BetaModel::constant(2.0)), rho0, 0.5, RkfConfig{}, opts);
    REQUIRE_FALSE(r.events.empty());
    CHECK(r.events.front().kind == IntegrationEvent::Kind::NegativeDensity);
    bool recovered = false;
    for (const auto& e : r.events) recovered = recovered || e.kind == IntegrationEvent::Kind::DensityRecovered;
    CHECK(recovered);
    CHECK(to_string(IntegrationEvent::Kind::NegativeDensity) == "negative_density");
}

TEST_CASE("gradient threshold stops the run with a Stop event") {
    const PeriodicGrid g(300);
    IntegrationOptions opts;
    opts.blowup.grad_threshold = 10.0;
    opts.blowup.cell_fraction = 0.0;
    const Field rho0 = build_initial_bump(g);
    const auto r = integrate(RhsEvaluator(g, BetaModel::power(2.0)), rho0, 0.5, RkfConfig{}, opts);
    CHECK(r.reason == StopReason::BlowupThreshold);
    REQUIRE_FALSE(r.events.empty());
    CHECK(r.events.back().kind == IntegrationEvent::Kind::Stop);
    CHECK(lp_norm(derivative(r.final), kInf) > 10.0);
}

TEST_CASE("case1 at n = 1000 stops between 0.07 and 0.12") {
    const PeriodicGrid g(1000);
    const auto r = integrate(RhsEvaluator(g, BetaModel::power(2.0)), build_initial_bump(g), 0.5, RkfConfig{});
    INFO("t_stop ", r.t_final, " reason ", to_string(r.reason));
    CHECK(is_blowup_stop(r.reason));
    CHECK(r.t_final >= 0.07);
    CHECK(r.t_final <= 0.12);
}

TEST_CASE("stop reason names") {
    CHECK(to_string(StopReason::Completed) == "Completed");
    CHECK(to_string(StopReason::DtUnderflow) == "DtUnderflow");
    CHECK(to_string(StopReason::BlowupThreshold) == "BlowupThreshold");
    CHECK(is_blowup_stop(StopReason::NonFinite));
    CHECK_FALSE(is_blowup_stop(StopReason::MaxSteps));
}
