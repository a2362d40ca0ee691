#include "aggdiff/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aggdiff/errors.hpp"

namespace aggdiff {

PeriodicGrid::PeriodicGrid(std::size_t n) : n_(n) {
    if (n < kMinNodes || n % 2 != 0) {
        throw InvalidArgument("grid size must be even and >= 16, got " + std::to_string(n));
    }
}

std::vector<double> PeriodicGrid::nodes() const {
    std::vector<double> x(n_);
    for (std::size_t j = 0; j < n_; ++j) x[j] = node(j);
    return x;
}

Field::Field(PeriodicGrid grid) : grid_(grid), values_(grid.size(), 0.0) {}

Field::Field(PeriodicGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw InvalidArgument("field has " + std::to_string(values_.size()) + " values for a grid of " +
                              std::to_string(grid_.size()));
    }
    for (std::size_t j = 0; j < values_.size(); ++j) {
        if (!std::isfinite(values_[j])) {
            throw NonFinite("non-finite field value at node " + std::to_string(j));
        }
    }
}

namespace {

void require_same_grid(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw InvalidArgument("fields live on different grids");
}

template <class Op>
Field combine(const Field& a, const Field& b, Op op) {
    require_same_grid(a, b);
    std::vector<double> out(a.size());
    auto va = a.values();
    auto vb = b.values();
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = op(va[j], vb[j]);
    return Field(a.grid(), std::move(out));
}

}  // namespace

Field operator+(const Field& a, const Field& b) {
    return combine(a, b, [](double x, double y) { return x + y; });
}

Field operator-(const Field& a, const Field& b) {
    return combine(a, b, [](double x, double y) { return x - y; });
}

Field operator*(const Field& a, const Field& b) {
    return combine(a, b, [](double x, double y) { return x * y; });
}

Field operator*(double s, const Field& a) {
    std::vector<double> out(a.values().begin(), a.values().end());
    for (double& v : out) v *= s;
    return Field(a.grid(), std::move(out));
}

double mean(const Field& f) {
    double sum = 0.0;
    for (double v : f.values()) sum += v;
    return sum / static_cast<double>(f.size());
}

double max_value(const Field& f) { return *std::ranges::max_element(f.values()); }

double min_value(const Field& f) { return *std::ranges::min_element(f.values()); }

double lp_norm(const Field& f, double p) {
    if (!(p >= 1.0)) throw InvalidArgument("lp_norm requires p >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f.values()) m = std::max(m, std::abs(v));
        return m;
    }
    const double h = f.grid().spacing();
    double sum = 0.0;
    if (p == 1.0) {
        for (double v : f.values()) sum += std::abs(v);
        return h * sum;
    }
    if (p == 2.0) {
        for (double v : f.values()) sum += v * v;
        return std::sqrt(h * sum);
    }
    for (double v : f.values()) sum += std::pow(std::abs(v), p);
    return std::pow(h * sum, 1.0 / p);
}

}  // namespace aggdiff
