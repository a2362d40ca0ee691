#include <algorithm>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "aggdiff/blowup_fit.hpp"
#include "aggdiff/config.hpp"
#include "aggdiff/errors.hpp"
#include "aggdiff/operator_checks.hpp"
#include "aggdiff/scenario.hpp"
#include "aggdiff/series_io.hpp"

namespace {

using namespace aggdiff;

struct RunArgs {
    std::string config;
    std::string preset;
    std::optional<std::size_t> n;
    std::optional<double> t_end;
    std::string output_dir;
};

RunConfig resolve(const RunArgs& a) {
    if (a.config.empty() && a.preset.empty()) throw ConfigError("config", "give --config, --preset or both");
    RunConfig cfg = a.preset.empty() ? RunConfig{} : preset(a.preset);
    if (!a.config.empty()) cfg = load_config(a.config, cfg);
    if (a.n) cfg.n = *a.n;
    if (a.t_end) cfg.t_end = *a.t_end;
    if (!a.output_dir.empty()) cfg.output_dir = a.output_dir;
    cfg.validate();
    return cfg;
}

void print_result(const ScenarioResult& r) {
    std::printf("n=%zu beta=%s stop=%s t=%.10g steps=%zu rejected=%zu\n", r.config.n,
                r.config.beta.to_string().c_str(), std::string(to_string(r.reason)).c_str(), r.t_final,
                r.accepted_steps, r.rejected_steps);
    std::printf("  max linf %.10g, min rho %.3e, mass drift %.3e", r.max_linf, r.min_density, r.max_mass_drift);
    if (r.linf_bound) std::printf(", linf bound %.10g (%zu violations)", *r.linf_bound, r.bound_violations);
    std::printf("\n");
    if (r.fit) {
        std::printf("  fit C=%.6g T=%.6g a=%.6g residual=%.3e (%zu samples)\n", r.fit->C, r.fit->T, r.fit->a,
                    r.fit->residual, r.fit->samples_used);
    } else if (!r.fit_note.empty()) {
        std::printf("  fit failed: %s\n", r.fit_note.c_str());
    }
    for (const auto& e : r.events) {
        std::printf("  [%.6g] %s: %s\n", e.t, std::string(to_string(e.kind)).c_str(), e.message.c_str());
    }
    std::printf("  output: %s\n", r.config.output_dir.c_str());
}

int cmd_run(const RunArgs& a) {
    const ScenarioResult r = run_scenario(resolve(a));
    print_result(r);
    return exit_code(r.reason);
}

int cmd_fit(const std::string& series, double window) {
    const auto rows = read_series(series);
    std::vector<FitSample> samples;
    for (const auto& r : rows) {
        if (r.grad_linf > 0.0) samples.push_back({r.t, r.grad_linf});
    }
    const BlowupFit f = blowup_fit(samples, FitOptions{.window = window});
    std::printf("C = %.10g\nT = %.10g\na = %.10g\nresidual = %.3e\nsamples_used = %zu\n", f.C, f.T, f.a, f.residual,
                f.samples_used);
    return 0;
}

int cmd_check(const OperatorCheckOptions& opts) {
    bool ok = true;
    for (const auto& c : run_operator_checks(opts)) {
        ok = ok && c.passed();
        std::printf("%s  %-52s measured %.3e  bounds [%.3g, %.3g]\n", c.passed() ? "PASS" : "FAIL", c.name.c_str(),
                    c.measured, c.lower, c.upper);
    }
    return ok ? 0 : 1;
}

int cmd_sweep(const RunArgs& a, const std::vector<std::size_t>& sizes, std::size_t jobs) {
    const RunConfig base = resolve(a);
    std::vector<RunConfig> configs;
    for (std::size_t n : sizes) {
        RunConfig c = base;
        c.n = n;
        c.output_dir = base.output_dir / ("n" + std::to_string(n));
        c.validate();
        configs.push_back(std::move(c));
    }
    int status = 0;
    const auto outcomes = run_sweep(configs, jobs);
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i].result) {
            print_result(*outcomes[i].result);
        } else {
            std::fprintf(stderr, "n=%zu failed: %s\n", configs[i].n, outcomes[i].error.c_str());
            status = 1;
        }
    }
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic nonlocal aggregation-diffusion solver"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto add_run_options = [](CLI::App* sub, RunArgs& a) {
        sub->add_option("--config", a.config, "key = value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--preset", a.preset, "case1 (beta = rho^2) or case2 (beta = log(1 + rho))")
            ->check(CLI::IsMember({"case1", "case2"}));
        sub->add_option("--t-end", a.t_end, "final time");
        sub->add_option("--output-dir", a.output_dir, "run directory");
    };
    auto* run = app.add_subcommand("run", "integrate one configuration");
    add_run_options(run, run_args);
    run->add_option("--n", run_args.n, "grid size");

    std::string series;
    double window = 0.5;
    auto* fit = app.add_subcommand("fit", "fit C / (T - t)^a to the grad_linf column of a series file");
    fit->add_option("--series", series, "series.csv from a run")->required()->check(CLI::ExistingFile);
    fit->add_option("--window", window, "trailing fraction of rows used")->check(CLI::Range(0.0, 1.0));

    OperatorCheckOptions check_opts;
    auto* check = app.add_subcommand("check-invariants", "run the operator identity suite");
    check->add_option("--n", check_opts.n, "grid size");
    check->add_option("--fields", check_opts.random_fields, "random fields per identity");
    check->add_option("--seed", check_opts.seed, "random seed");

    RunArgs sweep_args;
    std::vector<std::size_t> sizes{300, 600, 1000};
    std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* sweep = app.add_subcommand("sweep", "run one configuration at several grid sizes concurrently");
    add_run_options(sweep, sweep_args);
    sweep->add_option("--n", sizes, "grid sizes")->delimiter(',');
    sweep->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*run) return cmd_run(run_args);
        if (*fit) return cmd_fit(series, window);
        if (*check) return cmd_check(check_opts);
        if (*sweep) return cmd_sweep(sweep_args, sizes, jobs);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
