#include "aggdiff/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <set>
#include <thread>

#include "aggdiff/errors.hpp"
#include "aggdiff/rhs.hpp"
#include "text_format.hpp"

namespace aggdiff {

namespace {

constexpr std::size_t kDefaultSnapshots = 8;

std::vector<double> sample_grid(const RunConfig& cfg) {
    std::vector<double> times;
    for (std::size_t k = 1;; ++k) {
        const double t = static_cast<double>(k) * cfg.sample_every;
        if (!(t < cfg.t_end)) break;
        times.push_back(t);
    }
    for (double s : cfg.snapshot_times) {
        if (s > 0.0 && s < cfg.t_end) times.push_back(s);
    }
    std::ranges::sort(times);
    const auto dup = std::ranges::unique(times);
    times.erase(dup.begin(), dup.end());
    return times;
}

Snapshot make_snapshot(const RunConfig& cfg, double t, const Field& rho) {
    Snapshot s;
    s.t = t;
    s.x = rho.grid().nodes();
    s.rho.assign(rho.values().begin(), rho.values().end());
    s.meta["beta"] = cfg.beta.to_string();
    s.meta["hilbert_backend"] = std::string(to_string(cfg.hilbert_backend));
    s.meta["poisson_backend"] = std::string(to_string(cfg.poisson_backend));
    if (!cfg.seed_label.empty()) s.meta["seed_label"] = cfg.seed_label;
    return s;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError(path.string(), "open for writing");
    out << text;
    out.flush();
    if (!out) throw IoError(path.string(), "write");
}

std::string fmt(double v) { return detail::shortest(v); }

std::string manifest_text(const ScenarioResult& r, const Field& rho0) {
    std::string text = "# resolved run configuration\n" + to_config_text(r.config);
    text += "# initial mean: " + fmt(mean(rho0)) + "\n";
    text += "# initial linf: " + fmt(lp_norm(rho0, std::numeric_limits<double>::infinity())) + "\n";
    text += "# linf bound: " + (r.linf_bound ? fmt(*r.linf_bound) : std::string("unbounded")) + "\n";
    if (r.margin) {
        text += "# existence margin (c_s = " + fmt(r.config.c_s) + ", nu = beta(0)): " + fmt(r.margin->margin) + "\n";
    }
    return text;
}

std::string summary_text(const ScenarioResult& r) {
    std::string text;
    text += "reason: " + std::string(to_string(r.reason)) + "\n";
    text += "t_final: " + fmt(r.t_final) + "\n";
    text += "accepted_steps: " + std::to_string(r.accepted_steps) + "\n";
    text += "rejected_steps: " + std::to_string(r.rejected_steps) + "\n";
    text += "max_linf: " + fmt(r.max_linf) + "\n";
    text += "min_density: " + fmt(r.min_density) + "\n";
    text += "max_mass_drift: " + fmt(r.max_mass_drift) + "\n";
    text += "linf_bound: " + (r.linf_bound ? fmt(*r.linf_bound) : std::string("unbounded")) + "\n";
    text += "bound_violations: " + std::to_string(r.bound_violations) + "\n";
    return text;
}

std::string fit_text(const ScenarioResult& r) {
    if (!r.fit) return "status: failed\nnote: " + r.fit_note + "\n";
    const auto& f = *r.fit;
    return "status: ok\nC: " + fmt(f.C) + "\nT: " + fmt(f.T) + "\na: " + fmt(f.a) + "\nresidual: " + fmt(f.residual) +
           "\nsamples_used: " + std::to_string(f.samples_used) + "\n";
}

}  // namespace

ScenarioResult run_scenario(const RunConfig& cfg, const ScenarioOptions& opts) {
    cfg.validate();
    const PeriodicGrid grid(cfg.n);
    const Field rho0 = cfg.initial.build(grid);
    const RhsEvaluator rhs(grid, cfg.beta, cfg.hilbert_backend, cfg.poisson_backend, cfg.dealias);

    ScenarioResult res{.config = cfg, .final_state = rho0};
    res.linf_bound = theoretical_linf_bound(rho0, cfg.beta);
    res.margin = global_existence_margin(rho0, cfg.beta, cfg.beta.eval(0.0), cfg.c_s);

    const auto& dir = cfg.output_dir;
    std::unique_ptr<SeriesWriter> writer;
    if (opts.write_files) {
        std::error_code ec;
        std::filesystem::create_directories(dir / "snapshots", ec);
        if (ec) throw IoError((dir / "snapshots").string(), "create directory");
        write_text(dir / "manifest.txt", manifest_text(res, rho0));
        writer = std::make_unique<SeriesWriter>(dir / "series.csv");
    }

    const double mean0 = mean(rho0);
    const std::set<double> snapshot_set(cfg.snapshot_times.begin(), cfg.snapshot_times.end());
    // Candidates for the default equispaced snapshots.
    std::vector<std::pair<double, Field>> sampled;
    res.max_linf = max_value(rho0);
    res.min_density = min_value(rho0);
    double last_dt = 0.0;

    auto push_row = [&](double t, double dt, const Field& rho) {
        res.series.push_back(record(rho, t, dt));
        if (writer) writer->append(res.series.back());
    };

    Observer observer = [&](const StepReport& rep) {
        const double linf = lp_norm(rep.rho, std::numeric_limits<double>::infinity());
        res.max_linf = std::max(res.max_linf, linf);
        res.min_density = std::min(res.min_density, min_value(rep.rho));
        res.max_mass_drift = std::max(res.max_mass_drift, std::abs(mean(rep.rho) - mean0));
        if (res.linf_bound && linf > *res.linf_bound * (1.0 + 1e-6)) ++res.bound_violations;
        last_dt = rep.dt;
        if (rep.at_sample) {
            push_row(rep.t, rep.dt, rep.rho);
            if (cfg.snapshot_times.empty()) {
                sampled.emplace_back(rep.t, rep.rho);
            } else if (snapshot_set.contains(rep.t)) {
                res.snapshots.push_back(make_snapshot(cfg, rep.t, rep.rho));
            }
        }
        if (opts.observer) opts.observer(rep);
    };

    IntegrationOptions iopts;
    iopts.blowup = cfg.blowup;
    iopts.sample_times = sample_grid(cfg);
    if (cfg.t_end > 0.0) {
        IntegrationResult out = integrate(rhs, rho0, cfg.t_end, cfg.rkf, iopts, observer);
        res.reason = out.reason;
        res.t_final = out.t_final;
        res.accepted_steps = out.accepted_steps;
        res.rejected_steps = out.rejected_steps;
        res.events = std::move(out.events);
        res.final_state = std::move(out.final);
        if (res.series.back().t < res.t_final) {
            push_row(res.t_final, last_dt, res.final_state);
            if (cfg.snapshot_times.empty()) sampled.emplace_back(res.t_final, res.final_state);
        }
    } else {
        observer(StepReport{0, 0.0, 0.0, rho0, true});
    }
    if (writer) writer->close();

    if (cfg.snapshot_times.empty()) {
        // Nearest stored sample to each of the equispaced targets, without repeats.
        std::vector<std::size_t> picks;
        for (std::size_t i = 0; i < kDefaultSnapshots; ++i) {
            const double target = res.t_final * static_cast<double>(i) / (kDefaultSnapshots - 1);
            std::size_t best = 0;
            for (std::size_t k = 1; k < sampled.size(); ++k) {
                if (std::abs(sampled[k].first - target) < std::abs(sampled[best].first - target)) best = k;
            }
            if (picks.empty() || picks.back() != best) picks.push_back(best);
        }
        for (std::size_t k : picks) res.snapshots.push_back(make_snapshot(cfg, sampled[k].first, sampled[k].second));
    }

    const bool blew_up = res.reason == StopReason::BlowupThreshold || res.reason == StopReason::DtUnderflow;
    if (blew_up) {
        std::vector<FitSample> samples;
        for (const auto& row : res.series) {
            if (row.grad_linf > 0.0) samples.push_back({row.t, row.grad_linf});
        }
        try {
            res.fit = blowup_fit(samples, FitOptions{.window = cfg.fit_window});
        } catch (const FitDegenerate& e) {
            res.fit_note = e.what();
        } catch (const InvalidArgument& e) {
            res.fit_note = e.what();
        }
    }

    if (opts.write_files) {
        for (std::size_t k = 0; k < res.snapshots.size(); ++k) {
            char name[40];
            std::snprintf(name, sizeof(name), "snapshot_%02zu.csv", k);
            write_snapshot(dir / "snapshots" / name, res.snapshots[k]);
        }
        emit_plot_data(dir / "plot", res.series, res.snapshots);
        std::string events;
        for (const auto& e : res.events) {
            events += fmt(e.t) + " " + std::string(to_string(e.kind)) + " " + e.message + "\n";
        }
        write_text(dir / "events.txt", events);
        write_text(dir / "summary.txt", summary_text(res));
        if (blew_up) write_text(dir / "fit.txt", fit_text(res));
    }
    return res;
}

std::vector<SweepOutcome> run_sweep(const std::vector<RunConfig>& configs, std::size_t jobs) {
    std::vector<SweepOutcome> outcomes(configs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            try {
                outcomes[i].result = run_scenario(configs[i]);
            } catch (const std::exception& e) {
                outcomes[i].error = e.what();
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(configs.size(), 1));
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    return outcomes;
}

int exit_code(StopReason r) noexcept {
    if (r == StopReason::Completed) return 0;
    return is_blowup_stop(r) ? 2 : 1;
}

}  // namespace aggdiff
