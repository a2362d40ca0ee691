#pragma once

#include <array>
#include <string>
#include <string_view>

namespace aggdiff {

/// Density-dependent diffusion strength beta(rho) multiplying H rho in the flux.
class BetaModel {
public:
    enum class Kind {
        Constant,   ///< beta = nu
        Linear,     ///< beta = rho + nu
        Power,      ///< beta = rho^p, p >= 1
        LogSmooth,  ///< beta = log(1 + rho)
    };

    static BetaModel constant(double nu);
    static BetaModel linear(double nu);
    static BetaModel power(double p);
    static BetaModel log_smooth();

    /// Parses "constant:<nu>", "linear:<nu>", "power:<p>" or "log".
    static BetaModel parse(std::string_view text);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double parameter() const noexcept { return param_; }

    /// d^order beta / dx^order at x. Throws NegativeDensity for x < 0 and
    /// InvalidArgument for order outside 0..3.
    [[nodiscard]] double eval(double x, int order = 0) const;

    /// True when beta grows without bound, so the max principle bound applies.
    [[nodiscard]] bool unbounded_growth() const noexcept { return kind_ != Kind::Constant; }

    /// Inverse of the text accepted by parse().
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const BetaModel&, const BetaModel&) = default;

private:
    BetaModel(Kind kind, double param) : kind_(kind), param_(param) {}

    Kind kind_;
    double param_;
};

/// (C_beta, C_beta', C_beta'', C_beta''') as suprema of |d^i beta| over [0, M].
/// Entries are +infinity where a fractional power is singular at 0.
[[nodiscard]] std::array<double, 4> beta_sup_constants(const BetaModel& m, double max_density);

}  // namespace aggdiff
