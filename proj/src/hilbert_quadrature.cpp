#include "aggdiff/hilbert_quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace aggdiff {

namespace {

// Solves the cyclic system x_{i-1} + 4 x_i + x_{i+1} = r_i by Sherman-Morrison
// on top of two Thomas sweeps.
std::vector<double> solve_cyclic_1_4_1(const std::vector<double>& rhs) {
    const std::size_t n = rhs.size();
    const double gamma = -4.0;
    std::vector<double> diag(n, 4.0);
    diag.front() -= gamma;
    diag.back() -= 1.0 / gamma;

    auto thomas = [&](std::vector<double> r) {
        std::vector<double> cp(n);
        double denom = diag[0];
        cp[0] = 1.0 / denom;
        r[0] /= denom;
        for (std::size_t i = 1; i < n; ++i) {
            denom = diag[i] - cp[i - 1];
            cp[i] = 1.0 / denom;
            r[i] = (r[i] - r[i - 1]) / denom;
        }
        for (std::size_t i = n - 1; i-- > 0;) r[i] -= cp[i] * r[i + 1];
        return r;
    };

    std::vector<double> x = thomas(rhs);
    std::vector<double> u(n, 0.0);
    u.front() = gamma;
    u.back() = 1.0;
    const std::vector<double> z = thomas(std::move(u));
    const double factor = (x.front() + x.back() / gamma) / (1.0 + z.front() + z.back() / gamma);
    for (std::size_t i = 0; i < n; ++i) x[i] -= factor * z[i];
    return x;
}

}  // namespace

PeriodicCubicSpline::PeriodicCubicSpline(const Field& f)
    : grid_(f.grid()), f_(f.values().begin(), f.values().end()) {
    const std::size_t n = f_.size();
    const double h = grid_.spacing();
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double prev = f_[(i + n - 1) % n];
        const double next = f_[(i + 1) % n];
        rhs[i] = 6.0 * (next - 2.0 * f_[i] + prev) / (h * h);
    }
    m_ = solve_cyclic_1_4_1(rhs);
}

PeriodicCubicSpline::Cell PeriodicCubicSpline::cell(std::size_t i) const {
    const std::size_t n = f_.size();
    const std::size_t ip = (i + 1) % n;
    const double h = grid_.spacing();
    return {f_[i], (f_[ip] - f_[i]) / h - h * (2.0 * m_[i] + m_[ip]) / 6.0, 0.5 * m_[i],
            (m_[ip] - m_[i]) / (6.0 * h)};
}

namespace {

// Locates x on the periodic grid: cell index and offset within the cell.
std::pair<std::size_t, double> locate(const PeriodicGrid& grid, double x) {
    const double period = 2.0 * std::numbers::pi;
    const double h = grid.spacing();
    double shifted = std::fmod(x + std::numbers::pi, period);
    if (shifted < 0.0) shifted += period;
    auto i = static_cast<std::size_t>(std::floor(shifted / h));
    if (i >= grid.size()) i = grid.size() - 1;
    return {i, shifted - h * static_cast<double>(i)};
}

}  // namespace

double PeriodicCubicSpline::operator()(double x) const {
    const auto [i, s] = locate(grid_, x);
    const Cell c = cell(i);
    return c.c0 + s * (c.c1 + s * (c.c2 + s * c.c3));
}

double PeriodicCubicSpline::derivative(double x) const {
    const auto [i, s] = locate(grid_, x);
    const Cell c = cell(i);
    return c.c1 + s * (2.0 * c.c2 + 3.0 * s * c.c3);
}

Field hilbert_quadrature(const Field& f, const QuadratureOptions& opts) {
    const PeriodicGrid grid = f.grid();
    const std::size_t n = grid.size();
    const long half_n = static_cast<long>(n / 2);
    const double h = grid.spacing();
    const PeriodicCubicSpline spline(f);

    std::vector<PeriodicCubicSpline::Cell> cells(n);
    for (std::size_t i = 0; i < n; ++i) cells[i] = spline.cell(i);

    // Offsets u = y - x_j; breakpoints sit on the spline knots.
    std::vector<double> breaks(n + 1);
    for (long m = -half_n; m <= half_n; ++m) breaks[static_cast<std::size_t>(m + half_n)] = h * static_cast<double>(m);
    breaks.front() = -std::numbers::pi;
    breaks.back() = std::numbers::pi;

    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double fj = f[j];
        auto integrand = [&](double u) {
            long m = static_cast<long>(std::floor(u / h));
            m = std::clamp(m, -half_n, half_n - 1);
            const auto& c = cells[static_cast<std::size_t>((static_cast<long>(j) + m + static_cast<long>(n)) %
                                                           static_cast<long>(n))];
            const double s = u - h * static_cast<double>(m);
            if (m == 0 || m == -1) {
                // Cells touching the singular point: write S - f_j = u * q(u) exactly
                // so the kernel's pole cancels without round-off.
                double q;
                if (m == 0) {
                    q = c.c1 + u * (c.c2 + u * c.c3);
                } else {
                    const double slope = c.c1 + h * (2.0 * c.c2 + 3.0 * h * c.c3);
                    const double curv = c.c2 + 3.0 * h * c.c3;
                    q = slope + u * (curv + u * c.c3);
                }
                return -q * (u / std::tan(0.5 * u));
            }
            const double value = c.c0 + s * (c.c1 + s * (c.c2 + s * c.c3));
            return -(value - fj) / std::tan(0.5 * u);
        };
        const QuadratureResult r = integrate_adaptive(integrand, std::span<const double>(breaks), opts);
        out[j] = r.value / (2.0 * std::numbers::pi);
    }
    return Field(grid, std::move(out));
}

}  // namespace aggdiff
