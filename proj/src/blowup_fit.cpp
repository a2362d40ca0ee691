#include "aggdiff/blowup_fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "aggdiff/errors.hpp"

namespace aggdiff {

namespace {

struct LinearFit {
    double log_c;
    double a;
    double rss;
};

// Distances to the last sample, d_i = t_last - t_i, keep the model
// log g = log C - a log(d_i + delta) independent of where t = 0 sits.
LinearFit fit_at(std::span<const double> dist, std::span<const double> y, double delta) {
    const auto n = static_cast<double>(dist.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        sx += std::log(dist[i] + delta);
        sy += y[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double dx = std::log(dist[i] + delta) - mx;
        sxx += dx * dx;
        sxy += dx * (y[i] - my);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    LinearFit f{my - slope * mx, -slope, 0.0};
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double r = y[i] - (f.log_c - f.a * std::log(dist[i] + delta));
        f.rss += r * r;
    }
    return f;
}

double rss_of(std::span<const double> dist, std::span<const double> y, double log_c, double delta, double a) {
    double rss = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double r = y[i] - (log_c - a * std::log(dist[i] + delta));
        rss += r * r;
    }
    return rss;
}

// Solves the 3x3 system m x = b by Gaussian elimination with partial pivoting.
bool solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> b, std::array<double, 3>& x) {
    for (int c = 0; c < 3; ++c) {
        int p = c;
        for (int r = c + 1; r < 3; ++r) {
            if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
        }
        if (m[p][c] == 0.0) return false;
        std::swap(m[p], m[c]);
        std::swap(b[p], b[c]);
        for (int r = c + 1; r < 3; ++r) {
            const double f = m[r][c] / m[c][c];
            for (int k = c; k < 3; ++k) m[r][k] -= f * m[c][k];
            b[r] -= f * b[c];
        }
    }
    for (int c = 2; c >= 0; --c) {
        double s = b[c];
        for (int k = c + 1; k < 3; ++k) s -= m[c][k] * x[k];
        x[c] = s / m[c][c];
    }
    return true;
}

}  // namespace

BlowupFit blowup_fit(std::span<const FitSample> samples, const FitOptions& opts) {
    if (samples.size() < kMinFitSamples) {
        throw InvalidArgument("blowup_fit needs at least " + std::to_string(kMinFitSamples) + " samples, got " +
                              std::to_string(samples.size()));
    }
    if (!(opts.window > 0.0 && opts.window <= 1.0)) throw InvalidArgument("fit window must lie in (0, 1]");
    if (opts.scan_points < 8) throw InvalidArgument("fit scan needs at least 8 points");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i].g > 0.0) || !std::isfinite(samples[i].g) || !std::isfinite(samples[i].t)) {
            throw InvalidArgument("blowup_fit needs finite positive samples");
        }
        if (i > 0 && !(samples[i].t > samples[i - 1].t)) {
            throw InvalidArgument("blowup_fit needs strictly increasing times");
        }
    }

    auto used = static_cast<std::size_t>(std::ceil(opts.window * static_cast<double>(samples.size())));
    used = std::clamp(used, kMinFitSamples, samples.size());
    const auto window = samples.last(used);
    const double t_last = window.back().t;
    const double span = t_last - window.front().t;

    std::vector<double> dist(used), y(used);
    for (std::size_t i = 0; i < used; ++i) {
        dist[i] = t_last - window[i].t;
        y[i] = std::log(window[i].g);
    }

    // Coarse scan of delta = T - t_last on a log grid over (0, 2 span].
    const double hi = 2.0 * span;
    const double lo = hi * 1e-9;
    const int m = opts.scan_points;
    std::vector<double> deltas(m), rss(m);
    for (int i = 0; i < m; ++i) {
        deltas[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (m - 1));
        rss[i] = fit_at(dist, y, deltas[i]).rss;
    }
    const auto best = static_cast<int>(std::ranges::min_element(rss) - rss.begin());
    if (best == 0 || best == m - 1 || !(rss[best] < 0.999 * std::min(rss.front(), rss.back()))) {
        throw FitDegenerate("residual has no interior minimum in T; the data show no power-law singularity");
    }

    // Brent refinement in log(delta) between the scan neighbours.
    auto profile = [&](double log_delta) { return fit_at(dist, y, std::exp(log_delta)).rss; };
    const auto [log_delta, rss_min] = boost::math::tools::brent_find_minima(
        profile, std::log(deltas[best - 1]), std::log(deltas[best + 1]), std::numeric_limits<double>::digits / 2);
    (void)rss_min;
    double delta = std::exp(log_delta);
    const LinearFit lin = fit_at(dist, y, delta);
    double C = std::exp(lin.log_c);
    double a = lin.a;

    // Gauss-Newton on (C, delta, a) with a step-halving line search.
    double cur = rss_of(dist, y, std::log(C), delta, a);
    for (int iter = 0; iter < 50; ++iter) {
        std::array<std::array<double, 3>, 3> jtj{};
        std::array<double, 3> jtr{};
        for (std::size_t i = 0; i < used; ++i) {
            const double d = dist[i] + delta;
            const double r = y[i] - (std::log(C) - a * std::log(d));
            // Derivatives of the model log C - a log(d_i + delta).
            const std::array<double, 3> j = {1.0 / C, -a / d, -std::log(d)};
            for (int p = 0; p < 3; ++p) {
                jtr[p] += j[p] * r;
                for (int q = 0; q < 3; ++q) jtj[p][q] += j[p] * j[q];
            }
        }
        std::array<double, 3> step{};
        if (!solve3(jtj, jtr, step)) break;
        double lambda = 1.0;
        bool improved = false;
        for (int k = 0; k < 30; ++k, lambda *= 0.5) {
            const double c_new = C + lambda * step[0];
            const double d_new = delta + lambda * step[1];
            const double a_new = a + lambda * step[2];
            if (!(c_new > 0.0) || !(d_new > 0.0)) continue;
            const double trial = rss_of(dist, y, std::log(c_new), d_new, a_new);
            if (trial < cur) {
                C = c_new;
                delta = d_new;
                a = a_new;
                improved = cur - trial > 1e-15 * cur;
                cur = trial;
                break;
            }
        }
        if (!improved) break;
    }

    if (!(C > 0.0) || !(a > 0.0)) {
        throw FitDegenerate("fitted C or a is not positive (C = " + std::to_string(C) + ", a = " + std::to_string(a) +
                            ")");
    }
    return BlowupFit{C, t_last + delta, a, std::sqrt(cur / static_cast<double>(used)), used};
}

}  // namespace aggdiff
