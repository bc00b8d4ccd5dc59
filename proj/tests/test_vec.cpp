#include <doctest.h>

#include "hjhopf/vec.hpp"

using namespace hjhopf;

TEST_CASE("vector arithmetic") {
    const Vec a{1.0, 2.0}, b{3.0, -1.0};
    CHECK((a + b) == Vec{4.0, 1.0});
    CHECK((a - b) == Vec{-2.0, 3.0});
    CHECK((2.0 * a) == Vec{2.0, 4.0});
    CHECK(dot(a, b) == doctest::Approx(1.0));
    CHECK(distance(Vec{0.0, 0.0}, Vec{3.0, 4.0}) == doctest::Approx(5.0));
    CHECK_THROWS_AS(Vec(0), ConfigError);
    CHECK_THROWS_AS(Vec(4), ConfigError);
}

TEST_CASE("boxes") {
    const Box b(Vec{-1.0, 0.0}, Vec{1.0, 2.0});
    CHECK(b.dim() == 2);
    CHECK(b.center() == Vec{0.0, 1.0});
    CHECK(b.contains(Vec{0.5, 1.5}));
    CHECK_FALSE(b.contains(Vec{1.5, 1.0}));
    CHECK(b.distance_to_boundary(Vec{0.5, 1.0}) == doctest::Approx(0.5));
    CHECK(b.clamp(Vec{3.0, -3.0}) == Vec{1.0, 0.0});
    const Box s = b.scaled(2);
    CHECK(s.lo == Vec{-2.0, -1.0});
    CHECK(s.hi == Vec{2.0, 3.0});
    CHECK_THROWS_AS(Box(Vec{1.0}, Vec{1.0}), ConfigError);
    CHECK_THROWS_AS(Box(Vec{0.0}, Vec{1.0, 2.0}), ConfigError);
}

TEST_CASE("grids include both ends with axis 0 fastest") {
    const auto xs = linspace(-3, 3, 7);
    REQUIRE(xs.size() == 7);
    CHECK(xs.front() == -3);
    CHECK(xs.back() == 3);
    CHECK(xs[3] == doctest::Approx(0.0));
    const auto g = tensor_grid(Box(Vec{0.0, 10.0}, Vec{1.0, 11.0}), 3);
    REQUIRE(g.size() == 9);
    CHECK(g[1] == Vec{0.5, 10.0});
    CHECK(g[3] == Vec{0.0, 10.5});
    CHECK(g[8] == Vec{1.0, 11.0});
}
