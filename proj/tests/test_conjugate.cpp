#include <doctest.h>

#include <cmath>
#include <random>

#include "hjhopf/conjugate.hpp"
#include "hjhopf/error.hpp"

using namespace hjhopf;
using expr::Expr;

namespace {

ConvexData quadratic() { return ConvexData(Expr::parse("x1^2/2", 1), Box::cube(1, -20, 20)); }
ConvexData hyperbola() { return ConvexData(Expr::parse("sqrt(1+x1^2)", 1), Box::cube(1, -20, 20)); }

// Closed form of the conjugate of sqrt(1+x^2) on |q| <= 1.
double hyperbola_star(double q) { return -std::sqrt(1 - q * q); }

}  // namespace

TEST_CASE("quadratic is self-conjugate") {
    const ConvexData c = quadratic();
    CHECK(conjugate_value(c, Vec{3.0}) == doctest::Approx(4.5).epsilon(1e-12));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int i = 0; i < 100; ++i) {
        const double q = u(rng);
        CHECK(std::abs(conjugate_value(c, Vec{q}) - q * q / 2) <= 1e-8);
    }
}

TEST_CASE("conjugate of sqrt(1+x^2) and its effective domain") {
    const ConvexData c = hyperbola();
    CHECK(std::abs(conjugate_value(c, Vec{0.5}) - hyperbola_star(0.5)) <= 1e-6);
    CHECK(std::abs(conjugate_value(c, Vec{-0.9}) - hyperbola_star(-0.9)) <= 1e-6);
    CHECK(std::isinf(conjugate_value(c, Vec{2.0})));
    CHECK(std::isinf(conjugate_value(c, Vec{-1.5})));
    const ConjugatePoint p = conjugate_numeric(c, Vec{2.0});
    CHECK(p.boundary);
}

TEST_CASE("closed form overrides the numeric sup and encodes the domain") {
    const ConvexData c(Expr::parse("sqrt(1+x1^2)", 1), Box::cube(1, -20, 20), Expr::parse("-sqrt(1-q1^2)", 1), 1.0);
    CHECK(conjugate_value(c, Vec{0.5}) == doctest::Approx(hyperbola_star(0.5)).epsilon(1e-15));
    CHECK(std::isinf(conjugate_value(c, Vec{2.0})));
    CHECK(conjugate_gradient(c, Vec{0.6})[0] == doctest::Approx(0.6 / 0.8));
}

TEST_CASE("Fenchel-Young inequality on random pairs") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ux(-20, 20), uq(-0.99, 0.99);
    const ConvexData c = hyperbola();
    for (int i = 0; i < 1000; ++i) {
        const double x = ux(rng), q = uq(rng);
        const double s = conjugate_value(c, Vec{q});
        REQUIRE(std::isfinite(s));
        CHECK(c.sigma_value(Vec{x}) + s >= x * q - 1e-8);
    }
}

TEST_CASE("biconjugate reproduces sigma in the inner box") {
    const ConvexData c = quadratic();
    for (double x : {-5.0, -1.0, 0.0, 2.5, 7.0}) {
        double best = -INFINITY;
        for (double q = -10; q <= 10; q += 1e-3) best = std::max(best, x * q - conjugate_value(c, Vec{q}));
        CHECK(std::abs(best - x * x / 2) <= 1e-6);
    }
}

TEST_CASE("subdifferential at a smooth point, a vertical slope and a kink") {
    const auto smooth = subdifferential(quadratic(), Vec{2.0}, 0.1);
    CHECK(smooth.is_singleton());
    CHECK(smooth.lower == doctest::Approx(2.0).epsilon(1e-6));

    const ConvexData hyp(Expr::parse("sqrt(1+x1^2)", 1), Box::cube(1, -20, 20), Expr::parse("-sqrt(1-q1^2)", 1));
    const auto vertical = subdifferential(hyp, Vec{1.0}, 0.1);
    CHECK(vertical.unbounded_above);
    CHECK_FALSE(vertical.is_singleton());

    // sup over |x| <= 1 of x q is |q|.
    const ConvexData box(Expr::parse("0*x1", 1), Box::cube(1, -1, 1), Expr::parse("abs(q1)", 1));
    const auto kink = subdifferential(box, Vec{0.0}, 0.1);
    CHECK(kink.lower == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(kink.upper == doctest::Approx(1.0).epsilon(1e-8));

    CHECK_THROWS_AS(subdifferential(hyp, Vec{1.5}, 0.1), PreconditionError);
}

TEST_CASE("subgradient inequality holds for reported endpoints") {
    const ConvexData box(Expr::parse("0*x1", 1), Box::cube(1, -1, 1), Expr::parse("abs(q1)+q1^2", 1));
    const auto s = subdifferential(box, Vec{0.0}, 0.05);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 100; ++i) {
        const double z = u(rng);
        const double v = std::abs(z) + z * z;
        CHECK(v >= s.lower * z - 1e-8);
        CHECK(v >= s.upper * z - 1e-8);
    }
}

TEST_CASE("affine segment test") {
    const auto sq = [](const Vec& q) { return q[0] * q[0] / 2; };
    CHECK_FALSE(check_affine_segment(sq, Vec{1.0}, Vec{0.0}, Vec{0.0}));
    const auto ab = [](const Vec& q) { return std::abs(q[0]); };
    CHECK(check_affine_segment(ab, Vec{2.0}, Vec{1.0}, Vec{1.0}));
    const auto mx = [](const Vec& q) { return std::max(q[0], 2 * q[0] - 1); };
    CHECK(check_affine_segment(mx, Vec{0.9}, Vec{0.1}, Vec{1.0}));
    // y = 3 is not a subgradient of |q| at 1.
    CHECK_THROWS_AS(check_affine_segment(ab, Vec{2.0}, Vec{1.0}, Vec{3.0}), PreconditionError);
    // Endpoints agree with the affine function but the middle does not: v is not convex.
    const auto bad = [](const Vec& q) { return q[0] + 10 * std::max(0.0, q[0] * (1 - q[0])); };
    CHECK_THROWS_AS(check_affine_segment(bad, Vec{1.0}, Vec{0.0}, Vec{1.0}), NumericError);
}

TEST_CASE("construction rejects non-convex or time-dependent data") {
    CHECK_THROWS_AS(ConvexData(Expr::parse("-x1^2", 1), Box::cube(1, -5, 5)), ConfigError);
    CHECK_THROWS_AS(ConvexData(Expr::parse("sin(x1)", 1), Box::cube(1, -5, 5)), ConfigError);
    CHECK_THROWS_AS(ConvexData(Expr::parse("t*x1^2", 1), Box::cube(1, -5, 5)), ConfigError);
    CHECK_THROWS_AS(ConvexData(Expr::parse("x1^2", 1), Box::cube(1, -5, 5), std::nullopt, -1.0), ConfigError);
}

TEST_CASE("two-dimensional conjugate") {
    const ConvexData c(Expr::parse("x1^2/2 + x2^2", 2), Box::cube(2, -10, 10));
    CHECK(conjugate_value(c, Vec{1.0, 2.0}) == doctest::Approx(0.5 + 1.0).epsilon(1e-8));
    const Vec g = conjugate_gradient(c, Vec{1.0, 2.0});
    CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(g[1] == doctest::Approx(1.0).epsilon(1e-6));
}
