#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aggdiff/blowup_fit.hpp"
#include "aggdiff/config.hpp"
#include "aggdiff/diagnostics.hpp"
#include "aggdiff/integrator.hpp"
#include "aggdiff/series_io.hpp"

namespace aggdiff {

struct ScenarioResult {
    RunConfig config;
    StopReason reason = StopReason::Completed;
    double t_final = 0.0;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    std::vector<IntegrationEvent> events{};

    /// One row at t = 0, at every multiple of sample_every, at each snapshot
    /// time and at the final state.
    std::vector<TimeSeriesRecord> series{};
    std::vector<Snapshot> snapshots{};
    Field final_state;

    /// Attempted only after a BlowupThreshold or DtUnderflow stop.
    std::optional<BlowupFit> fit{};
    std::string fit_note{};

    /// Max principle level for rho0 and beta, when beta reaches it.
    std::optional<double> linf_bound{};
    /// Accepted steps with ||rho||_inf > bound (1 + 1e-6).
    std::size_t bound_violations = 0;
    std::optional<ExistenceMargin> margin{};

    /// Extremes over every accepted step, not only the sampled rows.
    double max_linf = 0.0;
    double min_density = 0.0;
    double max_mass_drift = 0.0;  ///< max |<rho(t)> - <rho0>|
};

struct ScenarioOptions {
    /// When false nothing touches the file system.
    bool write_files = true;
    /// Sees the initial state and every accepted step, after the built-in monitors.
    Observer observer;
};

/// Runs one configuration. With write_files, output_dir receives manifest.txt
/// (the resolved configuration, reloadable by load_config), series.csv,
/// snapshots/snapshot_<k>.csv, plot/ (emit_plot_data), events.txt, summary.txt
/// and, after a blow-up stop, fit.txt.
/// Throws ConfigError for an invalid configuration and IoError on file failures.
[[nodiscard]] ScenarioResult run_scenario(const RunConfig& cfg, const ScenarioOptions& opts = {});

struct SweepOutcome {
    std::optional<ScenarioResult> result;
    std::string error;
};

/// Independent scenarios on up to `jobs` threads; outcomes keep the input order.
[[nodiscard]] std::vector<SweepOutcome> run_sweep(const std::vector<RunConfig>& configs, std::size_t jobs);

/// Exit status for a finished run: 0 Completed, 2 blow-up stop, 1 otherwise.
[[nodiscard]] int exit_code(StopReason r) noexcept;

}  // namespace aggdiff
