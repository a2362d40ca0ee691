#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "aggdiff/diagnostics.hpp"
#include "aggdiff/errors.hpp"
#include "aggdiff/initial_data.hpp"
#include "aggdiff/spectral.hpp"

using namespace aggdiff;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPiSq = 4.0 * kPi * kPi;

Field constant(const PeriodicGrid& g, double c) { return Field(g, std::vector<double>(g.size(), c)); }

}  // namespace

TEST_CASE("record of rho = 1 + cos x") {
    const PeriodicGrid g(64);
    const Field rho = Field::sample(g, [](double x) { return 1.0 + std::cos(x); });
    const auto r = record(rho, 0.25, 1e-3);
    CHECK(r.t == 0.25);
    CHECK(r.dt == 1e-3);
    CHECK(r.mass == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    CHECK(r.linf == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(r.min_val) <= 1e-2);
    CHECK(r.grad_linf == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.lambda_linf == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.h_half == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
    CHECK(r.l2 == doctest::Approx(std::sqrt(3.0 * kPi)).epsilon(1e-12));
}

TEST_CASE("theoretical bound for rho = 1") {
    const PeriodicGrid g(32);
    const Field one = constant(g, 1.0);
    CHECK(*theoretical_linf_bound(one, BetaModel::power(2.0)) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    CHECK(*theoretical_linf_bound(one, BetaModel::log_smooth()) == doctest::Approx(std::expm1(kFourPiSq)).epsilon(1e-14));
    CHECK(*theoretical_linf_bound(one, BetaModel::linear(10.0)) == doctest::Approx(kFourPiSq - 10.0).epsilon(1e-14));
    CHECK(*theoretical_linf_bound(one, BetaModel::linear(100.0)) == 4.0);
    CHECK(*theoretical_linf_bound(one, BetaModel::constant(50.0)) == 4.0);
    CHECK_FALSE(theoretical_linf_bound(one, BetaModel::constant(1.0)).has_value());
}

TEST_CASE("theoretical bound for the bump and log beta") {
    const Field bump = build_initial_bump(PeriodicGrid(300));
    const auto b = theoretical_linf_bound(bump, BetaModel::log_smooth());
    REQUIRE(b.has_value());
    CHECK(*b == doctest::Approx(1.3972011031011779e17).epsilon(1e-8));
    CHECK(*b >= max_value(bump));
}

TEST_CASE("the bound never undercuts ||rho0||_inf") {
    const PeriodicGrid g(64);
    const Field tall = Field::sample(g, [](double x) { return 1.0 + 50.0 * std::exp(-20.0 * x * x); });
    CHECK(*theoretical_linf_bound(tall, BetaModel::power(4.0)) == max_value(tall));
}

TEST_CASE("bounds reject negative data") {
    const PeriodicGrid g(32);
    const Field c = Field::sample(g, [](double x) { return std::cos(x); });
    CHECK_THROWS_AS((void)theoretical_linf_bound(c, BetaModel::power(2.0)), InvalidArgument);
    CHECK_THROWS_AS((void)prop_max2_bound(c, BetaModel::power(2.0), 1.0, 1.0), InvalidArgument);
}

TEST_CASE("prop_max2_bound") {
    const PeriodicGrid g(64);
    const Field small = constant(g, 0.01);  // L1 = 0.02 pi
    CHECK(prop_max2_bound(small, BetaModel::power(2.0), 1.0, 1.0) == 1.0);
    CHECK_FALSE(prop_max2_bound(small, BetaModel::power(2.0), 1.0, 0.5).has_value());
    CHECK_FALSE(prop_max2_bound(constant(g, 1.0), BetaModel::power(2.0), 1.0, 1.0).has_value());
    const double nu = 2.0;
    CHECK(prop_max2_bound(small, BetaModel::log_smooth(), nu, std::expm1(nu)).has_value());
    CHECK_FALSE(prop_max2_bound(small, BetaModel::power(2.0), 0.0, 1.0).has_value());
}

TEST_CASE("existence margin for a constant density is <rho0> - nu") {
    const PeriodicGrid g(64);
    const auto m = global_existence_margin(constant(g, 1.0), BetaModel::constant(50.0), 50.0, 1.0);
    REQUIRE(m.has_value());
    CHECK(m->x == 0.0);
    CHECK(m->margin == -49.0);
    CHECK(m->linf_bound == 4.0);
}

TEST_CASE("existence margin of 1 + 0.5 cos x with constant beta") {
    const PeriodicGrid g(64);
    const Field rho = Field::sample(g, [](double x) { return 1.0 + 0.5 * std::cos(x); });
    const auto m = global_existence_margin(rho, BetaModel::constant(50.0), 50.0, 2.0);
    REQUIRE(m.has_value());
    const double x = 0.5 * std::sqrt(kPi);
    CHECK(m->x == doctest::Approx(x).epsilon(1e-12));
    CHECK(m->margin == doctest::Approx(1.0 - 50.0 + 12.5 * 2.0 * x).epsilon(1e-12));
    CHECK(m->beta_sup[1] == 0.0);
}

TEST_CASE("existence margin with power beta uses every term") {
    const PeriodicGrid g(64);
    const Field rho = Field::sample(g, [](double x) { return 1.0 + 0.5 * std::cos(x); });
    const auto m = global_existence_margin(rho, BetaModel::power(3.0), 0.0, 1.0);
    REQUIRE(m.has_value());
    const double x = m->x;
    const auto& c = m->beta_sup;
    const double expected =
        c[3] * x * x * x + (24.0 + kPi * kPi / 2.0) * c[2] * x * x + (12.5 + 33.0 * c[1]) * x + 1.0;
    CHECK(m->margin == doctest::Approx(expected).epsilon(1e-12));
    CHECK(c[3] == 6.0);
    CHECK_THROWS_AS((void)global_existence_margin(rho, BetaModel::power(3.0), 0.0, 0.0), InvalidArgument);
    CHECK_FALSE(global_existence_margin(rho, BetaModel::constant(1.0), 1.0, 1.0).has_value());
}

TEST_CASE("energy") {
    const PeriodicGrid g(64);
    const auto e = energy(constant(g, 1.0), 3.0);
    CHECK(e.lambda == 3.0);
    CHECK(e.h2_norm == doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-14));
    CHECK(e.d_linf == 0.5);
    CHECK(e.energy == doctest::Approx(std::sqrt(2.0 * kPi) + 0.5).epsilon(1e-14));

    const Field c = Field::sample(g, [](double x) { return 2.0 + std::cos(x); });
    const auto ec = energy(c, 4.0);
    // ||f||_{L^2}^2 = 8 pi + pi, ||f''||_{L^2}^2 = pi.
    CHECK(ec.h2_norm == doctest::Approx(std::sqrt(10.0 * kPi)).epsilon(1e-12));
    CHECK(ec.d_linf == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("energy needs lambda above ||rho||_inf") {
    const PeriodicGrid g(32);
    CHECK_THROWS_AS((void)energy(constant(g, 1.0), 1.0), LambdaTooSmall);
    CHECK_THROWS_AS((void)energy(constant(g, 1.0), 0.5), LambdaTooSmall);
    CHECK(default_energy_lambda(constant(g, 1.0), constant(g, 3.0)) == 6.0);
}

TEST_CASE("lambda lemma gap is nonnegative on concentrated nonnegative profiles") {
    const PeriodicGrid g(512);
    for (double w : {0.3, 0.5, 1.0, 1.25}) {
        const Field rho = Field::sample(g, [w](double x) {
            const double s = x / w;
            return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0;
        });
        REQUIRE(max_value(rho) >= 4.0 * mean(rho));
        INFO("width ", w, " gap ", lambda_lemma_gap(rho));
        CHECK(lambda_lemma_gap(rho) >= 0.0);
    }
    CHECK_THROWS_AS((void)lambda_lemma_gap(constant(g, 0.0)), InvalidArgument);
}
