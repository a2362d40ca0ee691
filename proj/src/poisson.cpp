#include "aggdiff/poisson.hpp"

#include <cmath>
#include <string>

#include "aggdiff/errors.hpp"
#include "aggdiff/spectral.hpp"

namespace aggdiff {

PoissonSolution solve_poisson_spectral(const Field& rho) {
    Spectrum s = to_spectrum(rho);
    auto& half = s.half();
    half[0] = 0.0;
    for (std::size_t k = 1; k < half.size(); ++k) {
        const double kd = static_cast<double>(k);
        half[k] /= -(kd * kd);
    }
    Field v = from_spectrum(s);
    Field grad = derivative(v);
    return {std::move(grad), std::move(v)};
}

PoissonSolution solve_poisson_fd(const Field& rho) {
    const std::size_t n = rho.size();
    const double h = rho.grid().spacing();
    const double avg = mean(rho);
    std::vector<double> r(n);
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        r[j] = rho[j] - avg;
        scale = std::max(scale, std::abs(rho[j]));
    }
    double residual_mean = 0.0;
    for (double x : r) residual_mean += x;
    residual_mean /= static_cast<double>(n);
    if (std::abs(residual_mean) > 1e-12 * std::max(1.0, scale)) {
        throw SingularSystem("periodic Poisson right-hand side has nonzero mean " + std::to_string(residual_mean));
    }

    // Pin v_0 = 0. Rows 1..n-1 then form a Dirichlet tridiagonal system
    // v_{j-1} - 2 v_j + v_{j+1} = h^2 r_j; row 0 holds by compatibility.
    const std::size_t m = n - 1;
    std::vector<double> cp(m);
    std::vector<double> d(m);
    for (std::size_t i = 0; i < m; ++i) d[i] = h * h * r[i + 1];
    double denom = -2.0;
    cp[0] = 1.0 / denom;
    d[0] /= denom;
    for (std::size_t i = 1; i < m; ++i) {
        denom = -2.0 - cp[i - 1];
        cp[i] = 1.0 / denom;
        d[i] = (d[i] - d[i - 1]) / denom;
    }
    for (std::size_t i = m - 1; i-- > 0;) d[i] -= cp[i] * d[i + 1];

    std::vector<double> v(n, 0.0);
    double vsum = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        v[j] = d[j - 1];
        vsum += v[j];
    }
    const double shift = vsum / static_cast<double>(n);
    for (double& x : v) x -= shift;

    std::vector<double> grad(n);
    for (std::size_t j = 0; j < n; ++j) {
        grad[j] = (v[(j + 1) % n] - v[(j + n - 1) % n]) / (2.0 * h);
    }
    return {Field(rho.grid(), std::move(grad)), Field(rho.grid(), std::move(v))};
}

PoissonSolution solve_poisson(const Field& rho, PoissonBackend backend) {
    return backend == PoissonBackend::Spectral ? solve_poisson_spectral(rho) : solve_poisson_fd(rho);
}

}  // namespace aggdiff
