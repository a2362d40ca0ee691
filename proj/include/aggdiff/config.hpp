#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "aggdiff/beta_model.hpp"
#include "aggdiff/initial_data.hpp"
#include "aggdiff/integrator.hpp"
#include "aggdiff/poisson.hpp"
#include "aggdiff/rhs.hpp"

namespace aggdiff {

/// Everything needed to reproduce one run.
struct RunConfig {
    std::size_t n = 300;
    BetaModel beta = BetaModel::power(2.0);
    InitialData initial = InitialData::bump();
    double t_end = 0.5;
    RkfConfig rkf;
    HilbertBackend hilbert_backend = HilbertBackend::Spectral;
    PoissonBackend poisson_backend = PoissonBackend::Spectral;
    bool dealias = true;
    double sample_every = 5e-4;
    BlowupCriteria blowup;
    /// Empty means 8 equispaced times over the realized run.
    std::vector<double> snapshot_times;
    std::filesystem::path output_dir = "out";
    std::string seed_label;
    double fit_window = 0.5;
    double c_s = 1.0;

    /// Throws ConfigError naming the first key that breaks an invariant.
    void validate() const;
};

/// "case1" (beta = rho^2) or "case2" (beta = log(1 + rho)); the two differ only in beta.
[[nodiscard]] RunConfig preset(std::string_view name);

/// Applies `key = value` lines (blank lines and '#' comments ignored) on top of `base`.
/// Throws ConfigError for unknown, repeated or malformed keys.
[[nodiscard]] RunConfig parse_config(std::string_view text, RunConfig base = {});

/// Reads and parses a file; IoError if it cannot be read. The result is validated.
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Every key with its resolved value, in the format parse_config reads.
[[nodiscard]] std::string to_config_text(const RunConfig& cfg);

}  // namespace aggdiff
