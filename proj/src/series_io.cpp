#include "aggdiff/series_io.hpp"

#include <array>
#include <cinttypes>
#include <fstream>
#include <sstream>

#include "aggdiff/errors.hpp"
#include "text_format.hpp"

namespace aggdiff {

namespace {

std::string format17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> split_numbers(std::string_view line, char sep, const std::string& where) {
    std::vector<double> out;
    while (true) {
        auto pos = sep == ' ' ? line.find_first_of(" \t") : line.find(sep);
        auto tok = line.substr(0, pos);
        while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
        while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r')) tok.remove_suffix(1);
        if (!tok.empty() || sep != ' ') {
            try {
                out.push_back(detail::parse_number(tok, "a value"));
            } catch (const InvalidArgument& e) {
                throw IoError(where, std::string("parse (") + e.what() + ")");
            }
        }
        if (pos == std::string_view::npos) break;
        line.remove_prefix(pos + 1);
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "open for reading");
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError(path.string(), "open for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError(path.string(), "write");
}

}  // namespace

SeriesWriter::SeriesWriter(std::filesystem::path path) : path_(std::move(path)) {
    file_ = std::fopen(path_.c_str(), "w");
    if (file_ == nullptr) throw IoError(path_.string(), "open for writing");
    if (std::fprintf(file_, "%s\n", kSeriesHeader) < 0) throw IoError(path_.string(), "write");
}

SeriesWriter::~SeriesWriter() {
    if (file_ != nullptr) std::fclose(file_);
}

void SeriesWriter::append(const TimeSeriesRecord& r) {
    if (file_ == nullptr) throw IoError(path_.string(), "append after close");
    if (any_ && !(r.t > last_t_)) throw InvalidArgument("series times must be strictly increasing");
    const std::array<double, 9> v = {r.t, r.mass, r.linf, r.min_val, r.grad_linf, r.lambda_linf, r.h_half, r.l2, r.dt};
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::fprintf(file_, i + 1 < v.size() ? "%.17g," : "%.17g\n", v[i]) < 0) {
            throw IoError(path_.string(), "write");
        }
    }
    std::fflush(file_);
    any_ = true;
    last_t_ = r.t;
}

void SeriesWriter::close() {
    if (file_ == nullptr) return;
    const int rc = std::fclose(file_);
    file_ = nullptr;
    if (rc != 0) throw IoError(path_.string(), "close");
}

void write_series(const std::filesystem::path& path, std::span<const TimeSeriesRecord> rows) {
    SeriesWriter w(path);
    for (const auto& r : rows) w.append(r);
    w.close();
}

std::vector<TimeSeriesRecord> read_series(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw IoError(path.string(), "read header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kSeriesHeader) throw IoError(path.string(), "parse (unexpected header '" + line + "')");
    std::vector<TimeSeriesRecord> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto v = split_numbers(line, ',', path.string() + ":" + std::to_string(line_no));
        if (v.size() != 9) throw IoError(path.string(), "parse (line " + std::to_string(line_no) + " has wrong width)");
        rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]});
        if (rows.size() > 1 && !(rows.back().t > rows[rows.size() - 2].t)) {
            throw IoError(path.string(), "parse (times not increasing at line " + std::to_string(line_no) + ")");
        }
    }
    return rows;
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& s) {
    if (s.x.size() != s.rho.size()) throw InvalidArgument("snapshot x and rho lengths differ");
    auto out = open_out(path);
    out << "# t: " << format17(s.t) << '\n' << "# n: " << s.x.size() << '\n';
    for (const auto& [k, v] : s.meta) out << "# " << k << ": " << v << '\n';
    out << "x,rho\n";
    for (std::size_t j = 0; j < s.x.size(); ++j) out << format17(s.x[j]) << ',' << format17(s.rho[j]) << '\n';
    finish(out, path);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    auto in = open_in(path);
    Snapshot s;
    std::string line;
    std::size_t declared = 0;
    bool header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.starts_with("# ")) {
            const auto colon = line.find(": ");
            if (colon == std::string::npos) throw IoError(path.string(), "parse (bad metadata '" + line + "')");
            const std::string key = line.substr(2, colon - 2);
            const std::string value = line.substr(colon + 2);
            if (key == "t") {
                s.t = split_numbers(value, ',', path.string()).at(0);
            } else if (key == "n") {
                declared = static_cast<std::size_t>(split_numbers(value, ',', path.string()).at(0));
            } else {
                s.meta[key] = value;
            }
            continue;
        }
        if (!header) {
            if (line != "x,rho") throw IoError(path.string(), "parse (expected 'x,rho' header)");
            header = true;
            continue;
        }
        const auto v = split_numbers(line, ',', path.string());
        if (v.size() != 2) throw IoError(path.string(), "parse (row width)");
        s.x.push_back(v[0]);
        s.rho.push_back(v[1]);
    }
    if (s.x.size() != declared) throw IoError(path.string(), "parse (row count does not match n)");
    return s;
}

void write_columns(const std::filesystem::path& path, const ColumnData& data) {
    auto out = open_out(path);
    out << '#';
    for (const auto& n : data.names) out << ' ' << n;
    out << '\n';
    for (const auto& row : data.rows) {
        if (row.size() != data.names.size()) throw InvalidArgument("column row width differs from header");
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << format17(row[i]);
        out << '\n';
    }
    finish(out, path);
}

ColumnData read_columns(const std::filesystem::path& path) {
    auto in = open_in(path);
    ColumnData d;
    std::string line;
    if (!std::getline(in, line) || !line.starts_with("#")) throw IoError(path.string(), "parse (missing header)");
    std::istringstream names(line.substr(1));
    for (std::string name; names >> name;) d.names.push_back(name);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto row = split_numbers(line, ' ', path.string());
        if (row.size() != d.names.size()) throw IoError(path.string(), "parse (row width)");
        d.rows.push_back(std::move(row));
    }
    return d;
}

std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& dir,
                                                  std::span<const TimeSeriesRecord> series,
                                                  std::span<const Snapshot> snapshots) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError(dir.string(), "create directory");

    std::vector<std::filesystem::path> written;
    ColumnData grad{{"t", "grad_linf"}, {}};
    ColumnData linf{{"t", "linf"}, {}};
    for (const auto& r : series) {
        grad.rows.push_back({r.t, r.grad_linf});
        linf.rows.push_back({r.t, r.linf});
    }
    written.push_back(dir / "grad_linf.dat");
    write_columns(written.back(), grad);
    written.push_back(dir / "linf.dat");
    write_columns(written.back(), linf);

    if (snapshots.empty()) return written;
    ColumnData index{{"k", "t"}, {}};
    for (std::size_t k = 0; k < snapshots.size(); ++k) index.rows.push_back({static_cast<double>(k), snapshots[k].t});
    written.push_back(dir / "profiles.dat");
    write_columns(written.back(), index);

    for (std::size_t k = 0; k < snapshots.size(); ++k) {
        ColumnData prof{{"x", "rho"}, {}};
        for (std::size_t j = 0; j < snapshots[k].x.size(); ++j) prof.rows.push_back({snapshots[k].x[j], snapshots[k].rho[j]});
        char name[32];
        std::snprintf(name, sizeof(name), "profile_%02zu.dat", k);
        written.push_back(dir / name);
        write_columns(written.back(), prof);
    }
    return written;
}

}  // namespace aggdiff
