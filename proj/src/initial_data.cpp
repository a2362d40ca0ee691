#include "aggdiff/initial_data.hpp"

#include <cmath>
#include <numbers>

#include "aggdiff/errors.hpp"
#include "aggdiff/quadrature.hpp"
#include "text_format.hpp"

namespace aggdiff {

namespace {

double raw_bump(double x) {
    if (std::abs(x) >= 2.0) return 0.0;
    const double u = 0.5 * x;
    return std::exp(-1.0 / (1.0 - u * u));
}

}  // namespace

double bump_normalizer() {
    static const double z = [] {
        QuadratureOptions opts;
        opts.abs_tol = 1e-15;
        const double breaks[] = {-2.0, -1.0, 0.0, 1.0, 2.0};
        return integrate_adaptive(raw_bump, std::span<const double>(breaks), opts).value / (2.0 * std::numbers::pi);
    }();
    return z;
}

Field build_initial_bump(const PeriodicGrid& grid) {
    const double z = bump_normalizer();
    return Field::sample(grid, [z](double x) { return raw_bump(x) / z; });
}

InitialData InitialData::parse(std::string_view text) {
    if (text == "bump") return bump();
    const auto colon = text.find(':');
    if (colon != std::string_view::npos) {
        const auto name = text.substr(0, colon);
        const double value = detail::parse_number(text.substr(colon + 1), "initial data parameter");
        if (!std::isfinite(value)) throw InvalidArgument("initial data parameter must be finite");
        if (name == "constant") {
            if (!(value >= 0.0)) throw InvalidArgument("constant initial data must be nonnegative");
            return {Kind::Constant, value};
        }
        if (name == "cosine") {
            if (!(std::abs(value) <= 1.0)) throw InvalidArgument("cosine amplitude must satisfy |amp| <= 1");
            return {Kind::Cosine, value};
        }
    }
    throw InvalidArgument("initial data '" + std::string(text) + "' is not one of bump, constant:<c>, cosine:<amp>");
}

Field InitialData::build(const PeriodicGrid& grid) const {
    switch (kind_) {
        case Kind::Bump: return build_initial_bump(grid);
        case Kind::Constant: return Field(grid, std::vector<double>(grid.size(), param_));
        case Kind::Cosine: return Field::sample(grid, [a = param_](double x) { return 1.0 + a * std::cos(x); });
    }
    return build_initial_bump(grid);
}

std::string InitialData::to_string() const {
    switch (kind_) {
        case Kind::Bump: return "bump";
        case Kind::Constant: return "constant:" + detail::shortest(param_);
        case Kind::Cosine: return "cosine:" + detail::shortest(param_);
    }
    return "bump";
}

}  // namespace aggdiff
