#include "aggdiff/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "aggdiff/errors.hpp"
#include "text_format.hpp"

namespace aggdiff {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double as_double(const std::string& key, std::string_view value) {
    try {
        const double v = detail::parse_number(value, "a number");
        if (!std::isfinite(v)) throw ConfigError(key, "value must be finite");
        return v;
    } catch (const InvalidArgument& e) {
        throw ConfigError(key, e.what());
    }
}

std::size_t as_count(const std::string& key, std::string_view value) {
    std::size_t v = 0;
    const auto* end = value.data() + value.size();
    auto res = std::from_chars(value.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) throw ConfigError(key, "expected a nonnegative integer");
    return v;
}

bool as_bool(const std::string& key, std::string_view value) {
    if (value == "true" || value == "on" || value == "1") return true;
    if (value == "false" || value == "off" || value == "0") return false;
    throw ConfigError(key, "expected true or false");
}

std::vector<double> as_list(const std::string& key, std::string_view value) {
    std::vector<double> out;
    if (value.empty() || value == "auto") return out;
    while (!value.empty()) {
        const auto comma = value.find(',');
        out.push_back(as_double(key, trim(value.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        value.remove_prefix(comma + 1);
    }
    return out;
}

template <class Parse>
auto wrap(const std::string& key, Parse&& parse) {
    try {
        return parse();
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidArgument& e) {
        throw ConfigError(key, e.what());
    }
}

using Setter = std::function<void(RunConfig&, const std::string& key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"n", [](RunConfig& c, const std::string& k, std::string_view v) { c.n = as_count(k, v); }},
        {"beta",
         [](RunConfig& c, const std::string& k, std::string_view v) {
             c.beta = wrap(k, [&] { return BetaModel::parse(v); });
         }},
        {"initial",
         [](RunConfig& c, const std::string& k, std::string_view v) {
             c.initial = wrap(k, [&] { return InitialData::parse(v); });
         }},
        {"t_end", [](RunConfig& c, const std::string& k, std::string_view v) { c.t_end = as_double(k, v); }},
        {"rkf.abs_tol", [](RunConfig& c, const std::string& k, std::string_view v) { c.rkf.abs_tol = as_double(k, v); }},
        {"rkf.rel_tol", [](RunConfig& c, const std::string& k, std::string_view v) { c.rkf.rel_tol = as_double(k, v); }},
        {"rkf.dt_init", [](RunConfig& c, const std::string& k, std::string_view v) { c.rkf.dt_init = as_double(k, v); }},
        {"rkf.dt_min", [](RunConfig& c, const std::string& k, std::string_view v) { c.rkf.dt_min = as_double(k, v); }},
        {"rkf.dt_max", [](RunConfig& c, const std::string& k, std::string_view v) { c.rkf.dt_max = as_double(k, v); }},
        {"rkf.safety", [](RunConfig& c, const std::string& k, std::string_view v) { c.rkf.safety = as_double(k, v); }},
        {"rkf.max_steps",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.rkf.max_steps = as_count(k, v); }},
        {"hilbert_backend",
         [](RunConfig& c, const std::string& k, std::string_view v) {
             c.hilbert_backend = wrap(k, [&] { return parse_hilbert_backend(v); });
         }},
        {"poisson_backend",
         [](RunConfig& c, const std::string& k, std::string_view v) {
             c.poisson_backend = wrap(k, [&] { return parse_poisson_backend(v); });
         }},
        {"dealias", [](RunConfig& c, const std::string& k, std::string_view v) { c.dealias = as_bool(k, v); }},
        {"sample_every",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.sample_every = as_double(k, v); }},
        {"blowup.grad_threshold",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.blowup.grad_threshold = as_double(k, v); }},
        {"blowup.cell_fraction",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.blowup.cell_fraction = as_double(k, v); }},
        {"snapshot_times",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.snapshot_times = as_list(k, v); }},
        {"output_dir", [](RunConfig& c, const std::string&, std::string_view v) { c.output_dir = std::string(v); }},
        {"seed_label", [](RunConfig& c, const std::string&, std::string_view v) { c.seed_label = std::string(v); }},
        {"fit.window", [](RunConfig& c, const std::string& k, std::string_view v) { c.fit_window = as_double(k, v); }},
        {"c_s", [](RunConfig& c, const std::string& k, std::string_view v) { c.c_s = as_double(k, v); }},
    };
    return table;
}

}  // namespace

void RunConfig::validate() const {
    if (n < PeriodicGrid::kMinNodes || n % 2 != 0) throw ConfigError("n", "grid size must be even and >= 16");
    if (!(t_end >= 0.0)) throw ConfigError("t_end", "must be nonnegative");
    if (!(rkf.abs_tol > 0.0)) throw ConfigError("rkf.abs_tol", "must be positive");
    if (!(rkf.rel_tol > 0.0)) throw ConfigError("rkf.rel_tol", "must be positive");
    if (!(rkf.dt_min > 0.0)) throw ConfigError("rkf.dt_min", "must be positive");
    if (!(rkf.dt_init >= rkf.dt_min)) throw ConfigError("rkf.dt_init", "must be >= rkf.dt_min");
    if (!(rkf.dt_max >= rkf.dt_init)) throw ConfigError("rkf.dt_max", "must be >= rkf.dt_init");
    if (!(rkf.safety > 0.0 && rkf.safety < 1.0)) throw ConfigError("rkf.safety", "must lie in (0, 1)");
    if (rkf.max_steps == 0) throw ConfigError("rkf.max_steps", "must be positive");
    if (!(sample_every > 0.0)) throw ConfigError("sample_every", "must be positive");
    if (!(blowup.grad_threshold > 0.0)) throw ConfigError("blowup.grad_threshold", "must be positive");
    if (!(blowup.cell_fraction >= 0.0)) throw ConfigError("blowup.cell_fraction", "must be nonnegative");
    for (double s : snapshot_times) {
        if (!(s >= 0.0 && s <= t_end)) throw ConfigError("snapshot_times", "every time must lie in [0, t_end]");
    }
    if (output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
    if (!(fit_window > 0.0 && fit_window <= 1.0)) throw ConfigError("fit.window", "must lie in (0, 1]");
    if (!(c_s > 0.0)) throw ConfigError("c_s", "must be positive");
}

RunConfig preset(std::string_view name) {
    RunConfig cfg;
    if (name == "case1") {
        cfg.beta = BetaModel::power(2.0);
    } else if (name == "case2") {
        cfg.beta = BetaModel::log_smooth();
    } else {
        throw ConfigError("preset", "unknown preset '" + std::string(name) + "' (case1|case2)");
    }
    cfg.output_dir = std::string(name);
    cfg.seed_label = std::string(name);
    return cfg;
}

RunConfig parse_config(std::string_view text, RunConfig base) {
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(std::string(line), "line " + std::to_string(line_no) + " is not 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError(key, "unknown key");
        if (!seen.insert(key).second) throw ConfigError(key, "given more than once");
        it->second(base, key, value);
    }
    return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "open for reading");
    std::ostringstream text;
    text << in.rdbuf();
    if (in.bad()) throw IoError(path.string(), "read");
    RunConfig cfg = parse_config(text.str(), std::move(base));
    cfg.validate();
    return cfg;
}

std::string to_config_text(const RunConfig& c) {
    using detail::shortest;
    std::ostringstream out;
    out << "n = " << c.n << '\n'
        << "beta = " << c.beta.to_string() << '\n'
        << "initial = " << c.initial.to_string() << '\n'
        << "t_end = " << shortest(c.t_end) << '\n'
        << "rkf.abs_tol = " << shortest(c.rkf.abs_tol) << '\n'
        << "rkf.rel_tol = " << shortest(c.rkf.rel_tol) << '\n'
        << "rkf.dt_init = " << shortest(c.rkf.dt_init) << '\n'
        << "rkf.dt_min = " << shortest(c.rkf.dt_min) << '\n'
        << "rkf.dt_max = " << shortest(c.rkf.dt_max) << '\n'
        << "rkf.safety = " << shortest(c.rkf.safety) << '\n'
        << "rkf.max_steps = " << c.rkf.max_steps << '\n'
        << "hilbert_backend = " << to_string(c.hilbert_backend) << '\n'
        << "poisson_backend = " << to_string(c.poisson_backend) << '\n'
        << "dealias = " << (c.dealias ? "true" : "false") << '\n'
        << "sample_every = " << shortest(c.sample_every) << '\n'
        << "blowup.grad_threshold = " << shortest(c.blowup.grad_threshold) << '\n'
        << "blowup.cell_fraction = " << shortest(c.blowup.cell_fraction) << '\n'
        << "snapshot_times = ";
    if (c.snapshot_times.empty()) out << "auto";
    for (std::size_t i = 0; i < c.snapshot_times.size(); ++i) {
        out << (i ? ", " : "") << shortest(c.snapshot_times[i]);
    }
    out << '\n'
        << "output_dir = " << c.output_dir.string() << '\n'
        << "seed_label = " << c.seed_label << '\n'
        << "fit.window = " << shortest(c.fit_window) << '\n'
        << "c_s = " << shortest(c.c_s) << '\n';
    return out.str();
}

}  // namespace aggdiff
