#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace aggdiff {

/// Uniform grid on the torus [-pi, pi): x_j = -pi + j*h, h = 2*pi/n.
class PeriodicGrid {
public:
    static constexpr std::size_t kMinNodes = 16;

    /// Throws InvalidArgument unless n is even and >= 16.
    explicit PeriodicGrid(std::size_t n);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double spacing() const noexcept { return 2.0 * std::numbers::pi / static_cast<double>(n_); }
    [[nodiscard]] double node(std::size_t j) const noexcept {
        return -std::numbers::pi + spacing() * static_cast<double>(j);
    }
    [[nodiscard]] std::vector<double> nodes() const;

    friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

private:
    std::size_t n_;
};

/// Real samples of a periodic function on a PeriodicGrid. Values are finite.
class Field {
public:
    /// Zero field.
    explicit Field(PeriodicGrid grid);
    /// Throws InvalidArgument on a size mismatch and NonFinite on a NaN/Inf sample.
    Field(PeriodicGrid grid, std::vector<double> values);

    template <class Fn>
    static Field sample(PeriodicGrid grid, Fn&& fn) {
        std::vector<double> v(grid.size());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(grid.node(j));
        return Field(grid, std::move(v));
    }

    [[nodiscard]] const PeriodicGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t j) const noexcept { return values_[j]; }

    /// Moves the samples out; the field is left empty.
    [[nodiscard]] std::vector<double> release() && noexcept { return std::move(values_); }

    friend Field operator+(const Field& a, const Field& b);
    friend Field operator-(const Field& a, const Field& b);
    friend Field operator*(double s, const Field& a);
    /// Nodewise product.
    friend Field operator*(const Field& a, const Field& b);

private:
    PeriodicGrid grid_;
    std::vector<double> values_;
};

/// (1/n) sum_j f_j, the rectangle-rule value of (1/2pi) * integral of f.
[[nodiscard]] double mean(const Field& f);
[[nodiscard]] double max_value(const Field& f);
[[nodiscard]] double min_value(const Field& f);

/// (h sum |f_j|^p)^(1/p); p = infinity gives max |f_j|. Requires p >= 1.
[[nodiscard]] double lp_norm(const Field& f, double p);

}  // namespace aggdiff
