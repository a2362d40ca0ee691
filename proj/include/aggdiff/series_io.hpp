#pragma once

#include <cstdio>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "aggdiff/diagnostics.hpp"

namespace aggdiff {

inline constexpr const char* kSeriesHeader = "t,mass,linf,min,grad_linf,lambda_linf,h_half,l2,dt";

/// Appends rows to a series file as they arrive. Values are written with 17
/// significant digits so they parse back exactly.
class SeriesWriter {
public:
    explicit SeriesWriter(std::filesystem::path path);
    ~SeriesWriter();
    SeriesWriter(const SeriesWriter&) = delete;
    SeriesWriter& operator=(const SeriesWriter&) = delete;

    /// Throws InvalidArgument unless r.t exceeds the previous row's time.
    void append(const TimeSeriesRecord& r);
    void close();

private:
    std::filesystem::path path_;
    std::FILE* file_ = nullptr;
    bool any_ = false;
    double last_t_ = 0.0;
};

void write_series(const std::filesystem::path& path, std::span<const TimeSeriesRecord> rows);
[[nodiscard]] std::vector<TimeSeriesRecord> read_series(const std::filesystem::path& path);

/// Density profile at one time plus self-describing metadata.
struct Snapshot {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> rho;
    /// Written as "# key: value" lines after t and n.
    std::map<std::string, std::string> meta;
};

void write_snapshot(const std::filesystem::path& path, const Snapshot& s);
[[nodiscard]] Snapshot read_snapshot(const std::filesystem::path& path);

/// Whitespace-separated columns under a "# name name ..." header line.
struct ColumnData {
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
};

void write_columns(const std::filesystem::path& path, const ColumnData& data);
[[nodiscard]] ColumnData read_columns(const std::filesystem::path& path);

/// Writes grad_linf.dat (t, grad_linf) and linf.dat (t, linf) into `dir`; with
/// snapshots, also profiles.dat (k, t) and one profile_<k>.dat (x, rho) each.
/// Returns the paths written.
std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& dir,
                                                  std::span<const TimeSeriesRecord> series,
                                                  std::span<const Snapshot> snapshots);

}  // namespace aggdiff
