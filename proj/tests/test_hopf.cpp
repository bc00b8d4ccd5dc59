#include <doctest.h>

#include <cmath>
#include <random>

#include "hjhopf/hopf.hpp"

using namespace hjhopf;
using expr::Expr;

namespace {

const HJProblem& example() {
    static const auto e = catalog("paper-example");
    return *e.problem;
}

// phi for the example written out by hand: x q - q^2/2 + t^2 ln(1+q^2).
double example_phi(double t, double x, double q) { return x * q - q * q / 2 + t * t * std::log1p(q * q); }

// Independent maximizer search: fine scan, then Newton on the closed-form derivative.
std::vector<double> example_argmax(double t, double x) {
    const auto d = [&](double q) { return x - q + 2 * t * t * q / (1 + q * q); };
    const auto dd = [&](double q) { return -1 + 2 * t * t * (1 - q * q) / ((1 + q * q) * (1 + q * q)); };
    std::vector<double> peaks;
    double best = -INFINITY;
    const int m = 20001;
    std::vector<double> qs(m), fs(m);
    for (int i = 0; i < m; ++i) {
        qs[i] = -10 + 20.0 * i / (m - 1);
        fs[i] = example_phi(t, x, qs[i]);
    }
    for (int i = 1; i + 1 < m; ++i) {
        if (fs[i] < fs[i - 1] || fs[i] < fs[i + 1]) continue;
        double q = qs[i];
        for (int k = 0; k < 50; ++k) q -= d(q) / dd(q);
        peaks.push_back(q);
        best = std::max(best, example_phi(t, x, q));
    }
    std::vector<double> out;
    for (double q : peaks)
        if (example_phi(t, x, q) >= best - 1e-9 * (1 + std::abs(best))) out.push_back(q);
    return out;
}

ProblemSpec quadratic_2d() {
    ProblemSpec s;
    s.name = "quadratic-2d";
    s.T = 1.0;
    s.H = Expr::parse("(p1^2+p2^2)/2", 2);
    s.sigma = std::make_shared<const ConvexData>(Expr::parse("(x1^2+x2^2)/2", 2), Box::cube(2, -20, 20),
                                                 Expr::parse("(q1^2+q2^2)/2", 2));
    s.sigma_star = Expr::parse("(q1^2+q2^2)/2", 2);
    s.q_box = Box::cube(2, -10, 10);
    s.a2 = {A2Kind::ConvexInP, std::nullopt};
    return s;
}

}  // namespace

TEST_CASE("accumulated Hamiltonian") {
    CHECK(cumulative_H(example(), Vec{2.0}, std::sqrt(2.0)) == doctest::Approx(-2 * std::log(5.0)).epsilon(1e-11));
    CHECK(cumulative_H(*catalog("zero").problem, Vec{4.0}, 1.0) == 0.0);
    CHECK(cumulative_H(*catalog("transport").problem, Vec{3.0}, 2.0) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK_THROWS_AS(cumulative_H(example(), Vec{1.0}, 2.5), PreconditionError);
    // Memoized result equals a fresh computation.
    CHECK(cumulative_H(example(), Vec{2.0}, std::sqrt(2.0)) == cumulative_H(example(), Vec{2.0}, std::sqrt(2.0)));
}

TEST_CASE("phi values") {
    CHECK(phi(example(), std::sqrt(2.0), Vec{0.4}, Vec{2.0}) == doctest::Approx(example_phi(std::sqrt(2.0), 0.4, 2.0)).epsilon(1e-11));
    CHECK(phi(example(), std::sqrt(2.0), Vec{0.4}, Vec{2.0}) == doctest::Approx(2.018876).epsilon(1e-6));
    CHECK(phi(example(), 0, Vec{0.0}, Vec{0.0}) == doctest::Approx(-example().sigma_star(Vec{0.0})));
    CHECK(phi(*catalog("lipschitz-sigma").problem, 0.5, Vec{0.0}, Vec{2.0}) == kMinusInf);
}

TEST_CASE("golden maximizer sets") {
    const MaximizerSet a = evaluate(example(), std::sqrt(2.0), Vec{0.4});
    REQUIRE(a.singleton());
    CHECK(std::abs(a.points[0][0] - 2.0) <= 1e-6);
    CHECK(a.value == doctest::Approx(0.8 - 2 + 2 * std::log(5.0)).epsilon(1e-10));

    const MaximizerSet b = evaluate(example(), 1.0, Vec{0.0});
    REQUIRE(b.points.size() == 2);
    CHECK(std::abs(b.points[0][0] + 1) <= 1e-6);
    CHECK(std::abs(b.points[1][0] - 1) <= 1e-6);
    CHECK(b.values[0] == doctest::Approx(b.values[1]).epsilon(1e-12));
}

TEST_CASE("u(0,x) reproduces sigma") {
    for (const auto& name : catalog_names()) {
        const auto e = catalog(name);
        for (double x : {-2.0, -0.3, 0.0, 1.1, 2.5})
            CHECK(std::abs(evaluate(*e.problem, 0.0, Vec{x}).value - e.problem->sigma().sigma_value(Vec{x})) <= 1e-6);
    }
}

TEST_CASE("evaluate agrees with an independent closed-form search on the example") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ut(0.05, 1.95), ux(-3, 3);
    for (int i = 0; i < 40; ++i) {
        const double t = ut(rng), x = ux(rng);
        const MaximizerSet ms = evaluate(example(), t, Vec{x});
        const auto oracle = example_argmax(t, x);
        REQUIRE_FALSE(oracle.empty());
        CHECK(std::abs(ms.value - example_phi(t, x, oracle[0])) <= 1e-9 * (1 + std::abs(ms.value)));
        CHECK(ms.points.size() == oracle.size());
        for (double q : oracle) CHECK(ms.distance_to(Vec{q}) <= 1e-6);
    }
}

TEST_CASE("value is an upper bound of phi over the box") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> uq(-10, 10);
    for (const auto& [t, x] : std::vector<std::pair<double, double>>{{0.3, 1.0}, {1.0, 0.0}, {1.7, -2.2}}) {
        const double u = evaluate(example(), t, Vec{x}).value;
        for (int i = 0; i < 1000; ++i) CHECK(u >= phi(example(), t, Vec{x}, Vec{uq(rng)}) - 1e-9);
    }
}

TEST_CASE("maximizer set invariants") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ut(0.05, 1.95), ux(-3, 3);
    for (int i = 0; i < 30; ++i) {
        const double t = ut(rng), x = ux(rng);
        const MaximizerSet ms = evaluate(example(), t, Vec{x});
        for (std::size_t k = 0; k < ms.points.size(); ++k) {
            CHECK(ms.values[k] >= ms.value - ms.value_tolerance);
            CHECK(example().q_box().contains(ms.points[k]));
            for (std::size_t j = k + 1; j < ms.points.size(); ++j)
                CHECK(distance(ms.points[k], ms.points[j]) >= ms.cluster_radius);
        }
        CHECK(ms.value_tolerance == doctest::Approx(1e-9 * (1 + std::abs(ms.value))));
        CHECK_FALSE(ms.boundary_contact);
    }
}

TEST_CASE("boundary contact when the box binds") {
    const auto e = catalog("transport", {{"q_lo", -1}, {"q_hi", 1}});
    const MaximizerSet ms = evaluate(*e.problem, 0.5, Vec{3.0});
    CHECK(ms.boundary_contact);
    CHECK(ms.points[0][0] == doctest::Approx(1.0));
}

TEST_CASE("brute-force oracle examples") {
    const MaximizerSet a = argmax_brute(example(), std::sqrt(2.0), Vec{0.4}, 100000);
    REQUIRE(a.singleton());
    CHECK(std::abs(a.points[0][0] - 2) <= 1e-4);

    const MaximizerSet z = argmax_brute(*catalog("zero").problem, 1.0, Vec{0.5}, 1000);
    REQUIRE(z.singleton());
    CHECK(z.points[0][0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(z.value == doctest::Approx(0.125).epsilon(1e-9));

    const MaximizerSet tr = argmax_brute(*catalog("transport").problem, 1.0, Vec{3.0}, 4096);
    REQUIRE(tr.singleton());
    CHECK(tr.points[0][0] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(tr.value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK_THROWS_AS(argmax_brute(example(), 1, Vec{0.0}, 1), PreconditionError);
}

TEST_CASE("evaluate matches the brute-force oracle on random points") {
    std::mt19937_64 rng(2024);
    for (const auto& name : catalog_names()) {
        const auto e = catalog(name);
        const HJProblem& p = *e.problem;
        std::uniform_real_distribution<double> ut(0, p.horizon()), ux(e.sample_box.lo[0], e.sample_box.hi[0]);
        const double spacing = p.q_box().diameter() / 4095;
        for (int i = 0; i < 20; ++i) {
            const double t = ut(rng), x = ux(rng);
            const MaximizerSet fast = evaluate(p, t, Vec{x});
            const MaximizerSet slow = argmax_brute(p, t, Vec{x}, 4096);
            CHECK(std::abs(fast.value - slow.value) <= 1e-6);
            for (const Vec& q : slow.points) CHECK(fast.distance_to(q) <= 2 * spacing);
        }
    }
}

TEST_CASE("difference quotients of u stay bounded under refinement") {
    const auto lip = [&](int m) {
        const auto xs = linspace(-3, 3, m);
        const auto ts = linspace(0.2, 1.8, m);
        double worst = 0;
        for (double t : ts) {
            double prev = evaluate(example(), t, Vec{xs[0]}).value;
            for (int i = 1; i < m; ++i) {
                const double cur = evaluate(example(), t, Vec{xs[i]}).value;
                worst = std::max(worst, std::abs(cur - prev) / (xs[i] - xs[i - 1]));
                prev = cur;
            }
        }
        return worst;
    };
    const double coarse = lip(9), fine = lip(17);
    CHECK(std::isfinite(coarse));
    CHECK(fine <= 2 * coarse);
    CHECK(coarse <= 2 * fine);
}

TEST_CASE("two-dimensional evaluation") {
    const HJProblem p(quadratic_2d());
    const MaximizerSet ms = evaluate(p, 0.5, Vec{1.5, -0.75});
    REQUIRE(ms.singleton());
    CHECK(ms.points[0][0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(ms.points[0][1] == doctest::Approx(-0.5).epsilon(1e-8));
    CHECK(ms.value == doctest::Approx((1.5 * 1.5 + 0.75 * 0.75) / 3).epsilon(1e-10));
}

TEST_CASE("sampled check of bounded maximizers") {
    CHECK(check_A1(example(), std::sqrt(2.0), Vec{0.4}, 0.1, 40).verdict == Verdict::Pass);
    CHECK(check_A1(*catalog("zero").problem, 1.0, Vec{2.0}, 0.5, 40).verdict == Verdict::Pass);

    const auto wide = catalog("anti-burgers", {{"T", 2.0}, {"q_lo", -100}, {"q_hi", 100}});
    const A1Report r = check_A1(*wide.problem, 0.99, Vec{0.0}, 0.02, 200);
    CHECK(r.verdict == Verdict::Fail);
    REQUIRE(r.witness);
    CHECK(r.witness->first > 1.0);
    CHECK_THROWS_AS(check_A1(example(), 1, Vec{0.0}, 0, 10), PreconditionError);
}
