#pragma once

#include <string>
#include <string_view>

#include "aggdiff/grid.hpp"

namespace aggdiff {

/// Z = (1/2pi) * integral over [-2, 2] of exp(-1/(1 - (s/2)^2)) ds, by adaptive quadrature.
[[nodiscard]] double bump_normalizer();

/// exp(-1/(1 - (x/2)^2)) / Z for |x| < 2 and exactly 0 elsewhere, so <rho0> = 1.
[[nodiscard]] Field build_initial_bump(const PeriodicGrid& grid);

/// Initial datum selected by text: "bump", "constant:<c>" or "cosine:<amp>" (1 + amp cos x).
class InitialData {
public:
    enum class Kind { Bump, Constant, Cosine };

    static InitialData parse(std::string_view text);
    static InitialData bump() { return InitialData(Kind::Bump, 0.0); }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double parameter() const noexcept { return param_; }
    [[nodiscard]] Field build(const PeriodicGrid& grid) const;
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const InitialData&, const InitialData&) = default;

private:
    InitialData(Kind kind, double param) : kind_(kind), param_(param) {}
    Kind kind_;
    double param_;
};

}  // namespace aggdiff
