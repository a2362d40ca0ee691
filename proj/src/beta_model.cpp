#include "aggdiff/beta_model.hpp"

#include <cmath>
#include <limits>

#include "aggdiff/errors.hpp"
#include "text_format.hpp"

namespace aggdiff {

using detail::parse_number;
using detail::shortest;

namespace {

// p (p-1) ... (p-order+1)
double falling_factorial(double p, int order) {
    double c = 1.0;
    for (int i = 0; i < order; ++i) c *= p - i;
    return c;
}

}  // namespace

BetaModel BetaModel::constant(double nu) {
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidArgument("constant beta needs nu >= 0");
    return {Kind::Constant, nu};
}

BetaModel BetaModel::linear(double nu) {
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidArgument("linear beta needs nu >= 0");
    return {Kind::Linear, nu};
}

BetaModel BetaModel::power(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("power beta needs p >= 1");
    return {Kind::Power, p};
}

BetaModel BetaModel::log_smooth() { return {Kind::LogSmooth, 0.0}; }

BetaModel BetaModel::parse(std::string_view text) {
    if (text == "log") return log_smooth();
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw InvalidArgument("beta law '" + std::string(text) + "' is not one of constant:<nu>, linear:<nu>, power:<p>, log");
    }
    const auto name = text.substr(0, colon);
    const double value = parse_number(text.substr(colon + 1), "beta parameter");
    if (name == "constant") return constant(value);
    if (name == "linear") return linear(value);
    if (name == "power") return power(value);
    throw InvalidArgument("unknown beta law '" + std::string(name) + "'");
}

std::string BetaModel::to_string() const {
    switch (kind_) {
        case Kind::Constant: return "constant:" + shortest(param_);
        case Kind::Linear: return "linear:" + shortest(param_);
        case Kind::Power: return "power:" + shortest(param_);
        case Kind::LogSmooth: return "log";
    }
    return {};
}

double BetaModel::eval(double x, int order) const {
    if (order < 0 || order > 3) throw InvalidArgument("beta derivative order must be 0..3");
    if (x < 0.0) throw NegativeDensity("beta evaluated at negative density " + shortest(x));
    switch (kind_) {
        case Kind::Constant:
            return order == 0 ? param_ : 0.0;
        case Kind::Linear:
            if (order == 0) return x + param_;
            return order == 1 ? 1.0 : 0.0;
        case Kind::Power: {
            const double c = falling_factorial(param_, order);
            if (c == 0.0) return 0.0;
            return c * std::pow(x, param_ - order);
        }
        case Kind::LogSmooth: {
            const double y = 1.0 + x;
            switch (order) {
                case 0: return std::log1p(x);
                case 1: return 1.0 / y;
                case 2: return -1.0 / (y * y);
                default: return 2.0 / (y * y * y);
            }
        }
    }
    return 0.0;
}

std::array<double, 4> beta_sup_constants(const BetaModel& m, double max_density) {
    if (!(max_density >= 0.0)) throw InvalidArgument("sup constants need M >= 0");
    const double M = max_density;
    switch (m.kind()) {
        case BetaModel::Kind::Constant:
            return {m.parameter(), 0.0, 0.0, 0.0};
        case BetaModel::Kind::Linear:
            return {M + m.parameter(), 1.0, 0.0, 0.0};
        case BetaModel::Kind::Power: {
            std::array<double, 4> out{};
            for (int i = 0; i < 4; ++i) {
                const double c = std::abs(falling_factorial(m.parameter(), i));
                const double e = m.parameter() - i;
                if (c == 0.0) {
                    out[i] = 0.0;
                } else if (e >= 0.0) {
                    out[i] = c * std::pow(M, e);
                } else {
                    out[i] = std::numeric_limits<double>::infinity();
                }
            }
            return out;
        }
        case BetaModel::Kind::LogSmooth:
            // |beta^(i)| is decreasing for i >= 1, so the supremum sits at 0.
            return {std::log1p(M), 1.0, 1.0, 2.0};
    }
    return {};
}

}  // namespace aggdiff
