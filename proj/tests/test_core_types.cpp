#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "nlv/core_types.hpp"
#include "nlv/error.hpp"

using namespace nlv;

TEST_CASE("grid nodes and trapezoid weights") {
    const Grid g(0.0, 1.0, 5);
    CHECK(g.h() == doctest::Approx(0.25));
    CHECK(g.node(4) == doctest::Approx(1.0));
    CHECK(g.weight(0) == doctest::Approx(0.125));
    CHECK(g.weight(2) == doctest::Approx(0.25));
    double total = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i) total += g.weight(i);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(Grid(0.0, 1.0, 2), InvalidArgument);
    CHECK_THROWS_AS(Grid(1.0, 1.0, 10), InvalidArgument);
}

TEST_CASE("fields reject non-finite values") {
    const Grid g(0.0, 1.0, 3);
    CHECK_THROWS_AS(Field(g, {0.0, std::numeric_limits<double>::quiet_NaN(), 1.0}), InvalidArgument);
    CHECK_THROWS_AS(Field(g, {0.0, 1.0}), InvalidArgument);
}

TEST_CASE("trapezoid rule is exact on affine functions") {
    const Grid g(-1.0, 2.0, 7);
    CHECK(integrate(Field::from_function(g, [](double x) { return 3.0 * x - 1.0; })) ==
          doctest::Approx(1.5).epsilon(1e-14));
    CHECK(integrate(Field::constant(g, 2.0)) == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("integration is linear and positive") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Grid g(0.0, 1.0, 51);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a(g.n()), b(g.n());
        for (auto& v : a) v = u(rng);
        for (auto& v : b) v = u(rng);
        const Field fa(g, a), fb(g, b);
        const double s = u(rng);
        CHECK(integrate(fa + s * fb) == doctest::Approx(integrate(fa) + s * integrate(fb)).epsilon(1e-12));
        std::vector<double> p(g.n());
        for (auto& v : p) v = std::abs(u(rng));
        CHECK(integrate(Field(g, p)) >= 0.0);
    }
}

TEST_CASE("trapezoid error is second order") {
    auto err = [](std::size_t n) {
        const Grid g(0.0, 1.0, n);
        return std::abs(integrate(Field::from_function(g, [](double x) { return std::exp(x); })) - (std::exp(1.0) - 1.0));
    };
    const double ratio = err(101) / err(201);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("separable kernel acts as a scalar") {
    const Grid g(0.0, 1.0, 11);
    const auto k = CompetitionKernel::separable(Field::from_function(g, [](double y) { return 1.0 + y; }));
    const Field u = Field::constant(g, 2.0);
    const Field p = k.apply(u);
    CHECK(p.max() == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(p.min() == p.max());
    CHECK(k.lower_bound() == doctest::Approx(1.0));
    CHECK(k.upper_bound() == doctest::Approx(2.0));
    const auto kg = k.as_general();
    CHECK_FALSE(kg.is_separable());
    CHECK(kg.apply(u).max() == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(k.scaled(2.0).weight()[3] == doctest::Approx(2.0 * k.weight()[3]));
    CHECK_THROWS_AS(CompetitionKernel::separable(Field::constant(g, 0.0)), InvalidArgument);
}

TEST_CASE("general kernel validation") {
    const Grid g(0.0, 1.0, 5);
    CHECK_THROWS_AS(CompetitionKernel::general(g, [](double x, double y) { return x - y; }), InvalidArgument);
    CHECK_THROWS_AS(CompetitionKernel::general(g, [](double x, double y) { return std::abs(x - y); }), InvalidArgument);
    const auto k = CompetitionKernel::general(g, [](double x, double y) { return 1.0 + x * y; });
    CHECK(k.at(4, 4) == doctest::Approx(2.0));
    CHECK_THROWS_AS(k.weight(), InvalidArgument);
    // integral of (1 + x y) * 1 dy = 1 + x/2, exact for the trapezoid rule
    const Field p = k.apply(Field::constant(g, 1.0));
    for (std::size_t i = 0; i < g.n(); ++i) CHECK(p[i] == doctest::Approx(1.0 + 0.5 * g.node(i)).epsilon(1e-14));
}

TEST_CASE("two-bump growth and window kernel") {
    const Grid g(0.0, 1.0, 201);
    const Field a = build_growth_figure1(0.3, 1.0, g);
    CHECK(a[60] == doctest::Approx(1.0));      // x = 0.3
    CHECK(a[200] == doctest::Approx(-1.0));    // clipped far from the center
    const Field k = build_kernel_figure1(0.5, g);
    CHECK(k[100] == doctest::Approx(1.0));
    CHECK(k[0] == doctest::Approx(0.1));
}

TEST_CASE("dimorphic parameters need separable self kernels") {
    const Grid g(0.0, 1.0, 5);
    const Field a = Field::constant(g, 0.5);
    SpeciesParams sep(0.01, a, CompetitionKernel::separable(Field::constant(g, 1.0)));
    SpeciesParams gen(0.01, a, CompetitionKernel::general(g, [](double x, double y) { return 1.0 + x * y; }));
    CHECK_THROWS_AS(DimorphicParams(sep, gen, Field::constant(g, 1.0), Field::constant(g, 1.0)), InvalidArgument);
    CHECK_THROWS_AS(DimorphicParams(sep, sep, Field::constant(g, -1.0), Field::constant(g, 1.0)), InvalidArgument);
    const DimorphicParams ok(sep, sep, Field::constant(g, 0.3), Field::constant(g, 0.7));
    CHECK(ok.kernel(1, 2)[0] == doctest::Approx(0.3));
    CHECK(ok.kernel(2, 1)[0] == doctest::Approx(0.7));
    CHECK_THROWS_AS(SpeciesParams(0.0, a, CompetitionKernel::separable(Field::constant(g, 1.0))), InvalidArgument);
}
