#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "aggdiff/blowup_fit.hpp"
#include "aggdiff/config.hpp"
#include "aggdiff/hilbert_quadrature.hpp"
#include "aggdiff/initial_data.hpp"
#include "aggdiff/integrator.hpp"
#include "aggdiff/operator_checks.hpp"
#include "aggdiff/rhs.hpp"
#include "aggdiff/scenario.hpp"
#include "aggdiff/spectral.hpp"

using namespace aggdiff;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, a);
    return buf;
}

ScenarioOptions no_files() {
    ScenarioOptions o;
    o.write_files = false;
    return o;
}

Verdict operator_identities() {
    OperatorCheckOptions opts;
    bool ok = true;
    std::string detail;
    for (const auto& c : {check_calderon(opts), check_tricomi(opts), check_anti_self_adjoint(opts),
                          check_composition(opts), check_cordoba(opts)}) {
        ok = ok && c.passed();
        detail += c.name + "=" + fmt("%.2e", c.measured) + (c.passed() ? " " : "(fail) ");
    }
    return {ok, detail};
}

Verdict backend_cross_validation() {
    const Field bump = build_initial_bump(PeriodicGrid(256));
    const double gap = lp_norm(hilbert_quadrature(bump) - hilbert_spectral(bump), kInf);
    const auto fd = check_poisson_fd_order(OperatorCheckOptions{});
    return {gap <= 1e-6 && fd.passed(),
            "hilbert bump gap n=256 " + fmt("%.3e", gap) + " (limit 1e-6), poisson fd order " + fmt("%.3f", fd.measured)};
}

Verdict case2_conservation(const ScenarioResult& r) {
    return {r.max_mass_drift <= 1e-10 && r.min_density >= -1e-6,
            "mass drift " + fmt("%.2e", r.max_mass_drift) + ", min density " + fmt("%.3e", r.min_density) +
                " (limit -1e-6)"};
}

Verdict case2_bound(const ScenarioResult& r) {
    const double initial = r.series.front().linf;
    const double final = r.series.back().linf;
    const bool ok = r.linf_bound && r.bound_violations == 0 && final > initial;
    return {ok, "bound " + fmt("%.6e", r.linf_bound.value_or(kInf)) + ", violations " +
                    std::to_string(r.bound_violations) + ", linf " + fmt("%.4f", initial) + " -> " + fmt("%.4f", final)};
}

Verdict case1_blowup() {
    bool ok = true;
    std::string detail;
    double prev_T = kInf;
    for (std::size_t n : {300u, 600u, 1000u}) {
        RunConfig c = preset("case1");
        c.n = n;
        const auto r = run_scenario(c, no_files());
        detail += "n=" + std::to_string(n) + " ";
        if (!r.fit) {
            ok = false;
            detail += "no fit (" + r.fit_note + ") ";
            continue;
        }
        const auto& f = *r.fit;
        ok = ok && f.T >= 0.07 && f.T <= 0.12 && f.a >= 0.9 && f.a <= 1.5 && f.T <= prev_T + 0.005;
        prev_T = f.T;
        detail += "T=" + fmt("%.4f", f.T) + " a=" + fmt("%.3f", f.a) + " ";
    }
    return {ok, detail};
}

Verdict synthetic_fit() {
    std::vector<FitSample> s;
    for (int i = 0; i < 100; ++i) {
        const double t = 0.45 * i / 99.0;
        s.push_back({t, 2.0 / std::pow(0.5 - t, 1.5)});
    }
    const auto f = blowup_fit(s, FitOptions{1.0, 400});
    const double err = std::max({std::abs(f.C - 2.0), std::abs(f.T - 0.5), std::abs(f.a - 1.5)});
    return {err <= 1e-6 && f.residual <= 1e-8, "max parameter error " + fmt("%.2e", err) + ", residual " +
                                                   fmt("%.2e", f.residual)};
}

Verdict integrator_checks() {
    auto decay = [](double, std::span<const double> y) {
        State out(y.begin(), y.end());
        for (double& v : out) v = -v;
        return out;
    };
    bool monotone = true;
    double prev = kInf;
    for (double t : {1e-4, 1e-6, 1e-8, 1e-10}) {
        RkfConfig c;
        c.abs_tol = c.rel_tol = t;
        const auto r = integrate_ode(decay, State{1.0}, 1.0, c);
        const double err = std::abs(r.y[0] - std::exp(-1.0));
        monotone = monotone && r.reason == StopReason::Completed && err <= prev;
        prev = err;
    }
    const PeriodicGrid g(128);
    const Field one(g, std::vector<double>(g.size(), 1.0));
    const auto r = integrate(RhsEvaluator(g, BetaModel::power(2.0)), one, 1.0, RkfConfig{});
    const double drift = lp_norm(r.final - one, kInf);
    return {monotone && drift <= 1e-12,
            std::string("tolerance monotone ") + (monotone ? "yes" : "no") + ", steady state drift " + fmt("%.2e", drift)};
}

Verdict symmetry_checks() {
    const PeriodicGrid g(64);
    const Field one(g, std::vector<double>(g.size(), 1.0));
    double rhs_const = 0.0;
    for (const auto& b : {BetaModel::power(2.0), BetaModel::log_smooth(), BetaModel::constant(1.0)})
        rhs_const = std::max(rhs_const, lp_norm(RhsEvaluator(g, b)(one), kInf));

    RunConfig c = preset("case2");
    double worst = 0.0;
    std::size_t steps = 0;
    ScenarioOptions opts = no_files();
    opts.observer = [&](const StepReport& s) {
        if (s.step > 100) return;
        steps = s.step;
        const std::size_t n = s.rho.size();
        for (std::size_t j = 1; j < n; ++j) worst = std::max(worst, std::abs(s.rho[j] - s.rho[n - j]));
    };
    (void)run_scenario(c, opts);
    return {rhs_const == 0.0 && worst <= 1e-8 && steps == 100,
            "rhs(const) " + fmt("%.1e", rhs_const) + ", parity defect over " + std::to_string(steps) + " steps " +
                fmt("%.2e", worst)};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const char* name, const std::function<Verdict()>& fn) {
        Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        if (!v.pass) ++failures;
        std::printf("criterion %d %-28s %s  %s\n", id, name, v.pass ? "PASS" : "FAIL", v.detail.c_str());
        std::fflush(stdout);
    };

    RunConfig case2 = preset("case2");
    std::optional<ScenarioResult> r2;
    auto run_case2 = [&]() -> const ScenarioResult& {
        if (!r2) r2 = run_scenario(case2, no_files());
        return *r2;
    };

    report(1, "operator identities", operator_identities);
    report(2, "backend cross-validation", backend_cross_validation);
    report(3, "case2 mass and positivity", [&] { return case2_conservation(run_case2()); });
    report(4, "case2 max principle bound", [&] { return case2_bound(run_case2()); });
    report(5, "case1 blow-up fit", case1_blowup);
    report(6, "synthetic blow-up fit", synthetic_fit);
    report(7, "integrator", integrator_checks);
    report(8, "steady state and parity", symmetry_checks);

    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
