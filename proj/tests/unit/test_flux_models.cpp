#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "aggdiff/beta_model.hpp"
#include "aggdiff/errors.hpp"
#include "aggdiff/initial_data.hpp"
#include "aggdiff/operator_checks.hpp"
#include "aggdiff/rhs.hpp"
#include "aggdiff/spectral.hpp"

using namespace aggdiff;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_diff(const Field& a, const Field& b) { return lp_norm(a - b, kInf); }

std::vector<BetaModel> all_laws() {
    return {BetaModel::constant(1.0), BetaModel::linear(0.5), BetaModel::power(2.0), BetaModel::power(1.5),
            BetaModel::log_smooth()};
}

}  // namespace

TEST_CASE("beta_eval: power 2 at x = 3") {
    const auto b = BetaModel::power(2.0);
    CHECK(b.eval(3.0, 0) == 9.0);
    CHECK(b.eval(3.0, 1) == 6.0);
    CHECK(b.eval(3.0, 2) == 2.0);
    CHECK(b.eval(3.0, 3) == 0.0);
}

TEST_CASE("beta_eval: log(1 + x) and linear") {
    const auto l = BetaModel::log_smooth();
    CHECK(l.eval(0.0, 0) == 0.0);
    CHECK(l.eval(0.0, 1) == 1.0);
    CHECK(l.eval(0.0, 2) == -1.0);
    CHECK(l.eval(0.0, 3) == 2.0);
    CHECK(l.eval(1.0, 0) == doctest::Approx(std::log(2.0)));
    CHECK(BetaModel::linear(0.5).eval(2.0) == 2.5);
    CHECK(BetaModel::linear(0.5).eval(2.0, 1) == 1.0);
    CHECK(BetaModel::constant(0.7).eval(5.0) == 0.7);
    CHECK(BetaModel::constant(0.7).eval(5.0, 1) == 0.0);
}

TEST_CASE("beta_eval rejects negative densities and bad orders") {
    for (const auto& b : all_laws()) {
        CHECK_THROWS_AS((void)b.eval(-1e-12), NegativeDensity);
        CHECK_THROWS_AS((void)b.eval(1.0, 4), InvalidArgument);
        CHECK_THROWS_AS((void)b.eval(1.0, -1), InvalidArgument);
    }
}

TEST_CASE("beta is nonnegative on [0, inf) for every law") {
    for (const auto& b : all_laws()) {
        for (double x : {0.0, 0.1, 1.0, 10.0, 1e3}) CHECK(b.eval(x) >= 0.0);
    }
}

TEST_CASE("beta parameters are validated") {
    CHECK_THROWS_AS((void)BetaModel::power(0.5), InvalidArgument);
    CHECK_THROWS_AS((void)BetaModel::constant(-1.0), InvalidArgument);
    CHECK_THROWS_AS((void)BetaModel::linear(-0.1), InvalidArgument);
}

TEST_CASE("beta text round trip") {
    for (const auto& b : all_laws()) CHECK(BetaModel::parse(b.to_string()) == b);
    CHECK(BetaModel::parse("power:2") == BetaModel::power(2.0));
    CHECK(BetaModel::parse("log") == BetaModel::log_smooth());
    CHECK_THROWS_AS((void)BetaModel::parse("quadratic"), InvalidArgument);
    CHECK_THROWS_AS((void)BetaModel::parse("power:two"), InvalidArgument);
    CHECK_THROWS_AS((void)BetaModel::parse("cubic:3"), InvalidArgument);
}

TEST_CASE("beta_sup_constants examples") {
    const auto p = beta_sup_constants(BetaModel::power(2.0), 2.0);
    CHECK(p[0] == 4.0);
    CHECK(p[1] == 4.0);
    CHECK(p[2] == 2.0);
    CHECK(p[3] == 0.0);
    for (double m : {0.0, 1.0, 100.0}) {
        const auto l = beta_sup_constants(BetaModel::log_smooth(), m);
        CHECK(l[0] == doctest::Approx(std::log1p(m)));
        CHECK(l[1] == 1.0);
        CHECK(l[2] == 1.0);
        CHECK(l[3] == 2.0);
        const auto c = beta_sup_constants(BetaModel::constant(0.3), m);
        CHECK(c[0] == 0.3);
        CHECK(c[1] == 0.0);
        CHECK(c[2] == 0.0);
        CHECK(c[3] == 0.0);
    }
    const auto lin = beta_sup_constants(BetaModel::linear(0.5), 3.0);
    CHECK(lin[0] == 3.5);
    CHECK(lin[1] == 1.0);
    CHECK(lin[2] == 0.0);
}

TEST_CASE("beta_sup_constants agree with a dense scan of |d^i beta|") {
    for (const auto& b : all_laws()) {
        const double M = 2.5;
        const auto sup = beta_sup_constants(b, M);
        for (int order = 0; order < 4; ++order) {
            double scan = 0.0;
            for (int i = 0; i <= 2000; ++i) scan = std::max(scan, std::abs(b.eval(M * i / 2000.0, order)));
            if (std::isinf(sup[order])) continue;
            CHECK(sup[order] == doctest::Approx(scan).epsilon(1e-12));
        }
    }
}

TEST_CASE("rhs of a constant field is exactly zero") {
    const PeriodicGrid g(64);
    const Field c(g, std::vector<double>(64, 1.0));
    for (const auto& b : all_laws()) {
        for (auto hb : {HilbertBackend::Spectral, HilbertBackend::Quadrature}) {
            for (auto pb : {PoissonBackend::Spectral, PoissonBackend::FiniteDifference}) {
                for (bool dealias : {false, true}) {
                    const Field f = RhsEvaluator(g, b, hb, pb, dealias)(c);
                    CHECK(lp_norm(f, kInf) == 0.0);
                }
            }
        }
    }
}

TEST_CASE("rhs conserves mass: zero mode vanishes") {
    const PeriodicGrid g(128);
    std::mt19937_64 rng(1);
    for (const auto& b : all_laws()) {
        for (int i = 0; i < 5; ++i) {
            Field rho = random_band_limited(g, 30, rng, 0.0);
            rho = rho + Field(g, std::vector<double>(g.size(), 0.5 - min_value(rho)));
            const Field f = RhsEvaluator(g, b)(rho);
            CHECK(std::abs(mean(f)) <= 1e-14);
            CHECK(std::abs(to_spectrum(f).at(0)) <= 1e-14);
        }
    }
}

TEST_CASE("constant beta linearization: rho = 1 + 0.1 cos x") {
    // -Lambda rho + d/dx(rho dv/dx) = -0.1 cos x + d/dx((1 + 0.1 cos x) 0.1 sin x) = 0.01 cos 2x.
    const PeriodicGrid g(64);
    const Field rho = Field::sample(g, [](double x) { return 1.0 + 0.1 * std::cos(x); });
    const Field expected = Field::sample(g, [](double x) { return 0.01 * std::cos(2.0 * x); });
    const Field f = RhsEvaluator(g, BetaModel::constant(1.0))(rho);
    CHECK(max_diff(f, expected) <= 1e-3);
    CHECK(max_diff(f, expected) <= 1e-12);
}

TEST_CASE("even densities give even right-hand sides") {
    const PeriodicGrid g(256);
    const Field rho = build_initial_bump(g);
    for (const auto& b : all_laws()) {
        const Field f = RhsEvaluator(g, b)(rho);
        double worst = 0.0;
        for (std::size_t j = 1; j < g.size(); ++j) worst = std::max(worst, std::abs(f[j] - f[g.size() - j]));
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("quadrature and spectral Hilbert backends give the same rhs on smooth fields") {
    const PeriodicGrid g(256);
    std::mt19937_64 rng(42);
    Field rho = random_band_limited(g, 8, rng);
    rho = rho + Field(g, std::vector<double>(g.size(), 1.0 - min_value(rho)));
    for (const auto& b : {BetaModel::power(2.0), BetaModel::log_smooth()}) {
        const Field spec = RhsEvaluator(g, b, HilbertBackend::Spectral, PoissonBackend::Spectral)(rho);
        const Field quad = RhsEvaluator(g, b, HilbertBackend::Quadrature, PoissonBackend::Spectral)(rho);
        INFO("gap ", max_diff(spec, quad));
        CHECK(max_diff(spec, quad) <= 1e-5);
    }
}

TEST_CASE("negative nodes are clamped for beta and counted") {
    const PeriodicGrid g(64);
    const Field rho = Field::sample(g, [](double x) { return std::cos(x); });
    RhsStats stats;
    const RhsEvaluator rhs(g, BetaModel::power(2.0), HilbertBackend::Spectral, PoissonBackend::Spectral, false);
    CHECK_NOTHROW((void)rhs(rho, &stats));
    // cos x < 0 strictly inside (pi/2, 3pi/2): 31 of the 64 nodes.
    CHECK(stats.clamped_nodes == 31);
    CHECK(stats.min_density == doctest::Approx(-1.0));
}

TEST_CASE("overflowing flux is reported as NonFinite") {
    const PeriodicGrid g(32);
    const Field rho = Field::sample(g, [](double x) { return 1e200 * (1.5 + std::cos(x)); });
    CHECK_THROWS_AS((void)RhsEvaluator(g, BetaModel::power(2.0))(rho), NonFinite);
}

TEST_CASE("evaluator checks the grid and reports its settings") {
    const RhsEvaluator rhs(PeriodicGrid(32), BetaModel::log_smooth());
    CHECK(rhs.dealias());
    CHECK_FALSE(RhsEvaluator(PeriodicGrid(32), BetaModel::constant(1.0)).dealias());
    CHECK_THROWS_AS((void)rhs(Field(PeriodicGrid(64))), InvalidArgument);
    CHECK(parse_hilbert_backend("quadrature") == HilbertBackend::Quadrature);
    CHECK(parse_poisson_backend("fd") == PoissonBackend::FiniteDifference);
    CHECK_THROWS_AS((void)parse_hilbert_backend("fft"), InvalidArgument);
    CHECK(to_string(HilbertBackend::Spectral) == "spectral");
}
