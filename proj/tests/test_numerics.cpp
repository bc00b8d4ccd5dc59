#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include "hjhopf/optimize.hpp"
#include "hjhopf/parallel.hpp"
#include "hjhopf/quadrature.hpp"

using namespace hjhopf;

TEST_CASE("adaptive Simpson on smooth and peaked integrands") {
    CHECK(adaptive_simpson<double>([](double t) { return std::sin(t); }, 0.0, M_PI) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(adaptive_simpson<double>([](double t) { return t * t; }, 0.0, 3.0) == doctest::Approx(9.0).epsilon(1e-13));
    const double peaked = adaptive_simpson<double>([](double t) { return 1.0 / (1e-4 + t * t); }, -1.0, 1.0);
    CHECK(peaked == doctest::Approx(2.0 / 1e-2 * std::atan(1.0 / 1e-2)).epsilon(1e-10));
    CHECK(adaptive_simpson<double>([](double) { return 1.0; }, 0.0, 0.0) == 0.0);
    const Vec v = adaptive_simpson<Vec>([](double t) { return Vec{t, 2 * t}; }, 0.0, 2.0);
    CHECK(v[0] == doctest::Approx(2.0));
    CHECK(v[1] == doctest::Approx(4.0));
}

TEST_CASE("memo table returns stored values and is shared across threads") {
    MemoTable<double> memo;
    int calls = 0;
    const auto f = [&] {
        ++calls;
        return 42.0;
    };
    CHECK(memo.get_or_compute(0, Vec{1.0}, 0.5, f) == 42.0);
    CHECK(memo.get_or_compute(0, Vec{1.0}, 0.5, f) == 42.0);
    CHECK(calls == 1);
    CHECK(memo.get_or_compute(1, Vec{1.0}, 0.5, f) == 42.0);
    CHECK(calls == 2);
    CHECK(memo.size() == 2);

    MemoTable<double> shared;
    std::atomic<int> mismatches{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < 4; ++w)
        pool.emplace_back([&] {
            for (int i = 0; i < 500; ++i) {
                const double q = i % 50;
                if (shared.get_or_compute(0, Vec{q}, 1.0, [&] { return q * q; }) != q * q) ++mismatches;
            }
        });
    for (auto& th : pool) th.join();
    CHECK(mismatches == 0);
    CHECK(shared.size() == 50);
}

TEST_CASE("golden section and derivative polish") {
    const auto f = [](double x) { return -(x - 0.3) * (x - 0.3); };
    const auto c = opt::golden_maximize(f, -1, 0, 1, 1e-12);
    CHECK(c.point[0] == doctest::Approx(0.3).epsilon(1e-8));
    const auto s = opt::polish_stationary([](double x) { return -2 * (x - 0.3); }, 0.25, -1, 1, 0.01, 1, 1e-14);
    REQUIRE(s);
    CHECK(*s == doctest::Approx(0.3).epsilon(1e-12));
    CHECK_FALSE(opt::polish_stationary([](double) { return 1.0; }, 0, -1, 1, 0.01, 0.5, 1e-12));
}

TEST_CASE("multistart finds both maxima of a symmetric double well") {
    opt::Objective obj;
    obj.value = [](const Vec& q) { return -std::pow(q[0] * q[0] - 1, 2); };
    obj.gradient = [](const Vec& q) { return Vec{-4 * q[0] * (q[0] * q[0] - 1)}; };
    const auto clusters = opt::cluster(opt::multistart_maximize(obj, Box::cube(1, -3, 3), {}), 1e-6);
    REQUIRE(clusters.size() >= 2);
    CHECK(std::abs(std::abs(clusters[0].point[0]) - 1) < 1e-9);
    CHECK(std::abs(std::abs(clusters[1].point[0]) - 1) < 1e-9);
    CHECK(clusters[0].point[0] * clusters[1].point[0] < 0);
}

TEST_CASE("multistart resolves two maxima inside one seed cell") {
    // Peaks at +-0.02 on [-10,10]: both sit between two neighbouring seed nodes.
    const double a = 0.02;
    opt::Objective obj;
    obj.value = [&](const Vec& q) { return -std::pow(q[0] * q[0] - a * a, 2) - 1e-3 * q[0] * q[0] * q[0] * q[0]; };
    const auto clusters = opt::cluster(opt::multistart_maximize(obj, Box::cube(1, -10, 10), {}), 2e-5);
    int near = 0;
    for (const auto& c : clusters)
        if (std::abs(std::abs(c.point[0]) - a) < 1e-4) ++near;
    CHECK(near == 2);
}

TEST_CASE("projected BFGS in two dimensions respects the box") {
    opt::Objective obj;
    obj.value = [](const Vec& q) { return -(q[0] - 5) * (q[0] - 5) - (q[1] + 0.5) * (q[1] + 0.5); };
    obj.gradient = [](const Vec& q) { return Vec{-2 * (q[0] - 5), -2 * (q[1] + 0.5)}; };
    opt::MultistartOptions o;
    o.grid_per_axis = 16;
    const auto clusters = opt::cluster(opt::multistart_maximize(obj, Box::cube(2, -2, 2), o), 1e-6);
    REQUIRE_FALSE(clusters.empty());
    CHECK(clusters[0].point[0] == doctest::Approx(2.0));
    CHECK(clusters[0].point[1] == doctest::Approx(-0.5).epsilon(1e-8));
}

TEST_CASE("clustering merges nearby candidates and orders by value") {
    std::vector<opt::Candidate> c{{Vec{0.0}, 1.0}, {Vec{1e-8}, 1.5}, {Vec{1.0}, 2.0}};
    const auto cl = opt::cluster(c, 1e-6);
    REQUIRE(cl.size() == 2);
    CHECK(cl[0].value == 2.0);
    CHECK(cl[1].value == 1.5);
    CHECK(cl[1].members == 2);
}

TEST_CASE("parallel map keeps index order and rethrows the first failure") {
    setenv("HJHOPF_WORKERS", "3", 1);
    const auto v = parallel_map(100, [](std::size_t i) { return static_cast<int>(i * i); });
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == static_cast<int>(i * i));
    try {
        parallel_map(10, [](std::size_t i) -> int {
            if (i == 4 || i == 7) throw Error("boom " + std::to_string(i));
            return 0;
        });
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(std::string(e.what()) == "boom 4");
    }
    unsetenv("HJHOPF_WORKERS");
    CHECK(worker_count() >= 1);
}
