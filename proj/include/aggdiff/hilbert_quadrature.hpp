#pragma once

#include <cstddef>
#include <vector>

#include "aggdiff/grid.hpp"
#include "aggdiff/quadrature.hpp"

namespace aggdiff {

/// Periodic cubic spline through the samples of a Field.
class PeriodicCubicSpline {
public:
    explicit PeriodicCubicSpline(const Field& f);

    /// S(x) for any real x (wrapped onto the period).
    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] double derivative(double x) const;

    /// Second derivatives at the nodes.
    [[nodiscard]] const std::vector<double>& curvature() const noexcept { return m_; }

    /// Cubic on cell i = [x_i, x_{i+1}] in powers of s = x - x_i.
    struct Cell {
        double c0, c1, c2, c3;
    };
    [[nodiscard]] Cell cell(std::size_t i) const;

private:
    PeriodicGrid grid_;
    std::vector<double> f_;
    std::vector<double> m_;
};

/// Periodic Hilbert transform (1/2pi) P.V. int f(y) / tan((x_j - y)/2) dy at every node,
/// with f replaced by its periodic cubic spline. The node value is subtracted before
/// integrating (the principal value of the bare kernel vanishes) and the regular
/// remainder is integrated adaptively cell by cell.
///
/// Throws QuadratureFailure if a node's integral exceeds the interval budget.
[[nodiscard]] Field hilbert_quadrature(const Field& f, const QuadratureOptions& opts = {});

}  // namespace aggdiff
