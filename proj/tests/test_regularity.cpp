#include <doctest.h>

#include <cmath>
#include <random>

#include "hjhopf/regularity.hpp"

using namespace hjhopf;

namespace {

const HJProblem& example() {
    static const auto e = catalog("paper-example");
    return *e.problem;
}

double example_curve(double y, double t) { return y - 2 * t * t * y / (1 + y * y); }

}  // namespace

TEST_CASE("point classification examples") {
    const double t = std::sqrt(2.0);
    const PointReport a = classify_point(example(), t, Vec{0.4});
    CHECK(a.verdict == PointVerdict::Regular);
    REQUIRE(a.gradient);
    CHECK(a.gradient->p == doctest::Approx(2 * std::sqrt(2.0) * std::log(5.0)).epsilon(1e-8));
    CHECK(a.gradient->q[0] == doctest::Approx(2.0).epsilon(1e-6));

    const PointReport b = classify_point(example(), 1.0, Vec{0.0});
    CHECK(b.verdict == PointVerdict::Singular);
    CHECK_FALSE(b.gradient);
    REQUIRE(b.reachable.size() == 2);
    for (const auto& g : b.reachable) {
        CHECK(g.p == doctest::Approx(2 * std::log(2.0)).epsilon(1e-8));
        CHECK(std::abs(std::abs(g.q[0]) - 1) <= 1e-6);
    }

    const PointReport c = classify_point(example(), 0.5, Vec{0.0});
    CHECK(c.verdict == PointVerdict::Regular);
    CHECK(std::abs(c.gradient->p) <= 1e-6);
    CHECK(std::abs(c.gradient->q[0]) <= 1e-6);

    CHECK_THROWS_AS(classify_point(example(), 0.0, Vec{0.0}), PreconditionError);
    CHECK_THROWS_AS(classify_point(example(), 2.0, Vec{0.0}), PreconditionError);
    CHECK(to_string(PointVerdict::Borderline) == "borderline");
}

TEST_CASE("singular segment on the axis") {
    // For t > 1/sqrt2 the maximizers at x = 0 are the roots of q^2 = 2t^2 - 1.
    for (double t : {0.8, 1.2, 1.9}) {
        const PointReport r = classify_point(example(), t, Vec{0.0});
        CHECK(r.verdict == PointVerdict::Singular);
        REQUIRE(r.ell.points.size() == 2);
        const double q = std::sqrt(2 * t * t - 1);
        CHECK(r.ell.points[0][0] == doctest::Approx(-q).epsilon(1e-6));
        CHECK(r.ell.points[1][0] == doctest::Approx(q).epsilon(1e-6));
    }
}

TEST_CASE("reachable gradients") {
    CHECK(reachable_gradients(example(), 1.0, Vec{0.0}).size() == 2);
    const auto z = reachable_gradients(*catalog("zero").problem, 1.0, Vec{0.7});
    REQUIRE(z.size() == 1);
    CHECK(z[0].p == 0.0);
    CHECK(z[0].q[0] == doctest::Approx(0.7).epsilon(1e-8));
}

TEST_CASE("regular iff singleton, against the brute-force clustering") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ut(0.05, 1.95), ux(-3, 3);
    int agree = 0, total = 0;
    for (int i = 0; i < 200; ++i) {
        const double t = ut(rng), x = ux(rng);
        const PointReport r = classify_point(example(), t, Vec{x});
        CHECK((r.verdict == PointVerdict::Singular) == (r.ell.points.size() >= 2));
        if (r.verdict == PointVerdict::Regular) {
            REQUIRE(r.gradient);
            CHECK(r.gradient->p == doctest::Approx(-example().H(t, r.ell.points[0])));
        }
        if (r.verdict == PointVerdict::Borderline) continue;
        ++total;
        agree += (argmax_brute(example(), t, Vec{x}, 4096).points.size() == 1) == (r.verdict == PointVerdict::Regular);
    }
    CHECK(agree == total);
}

TEST_CASE("gradient consistency at regular points") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ut(0.1, 1.9), ux(-3, 3);
    const double h = 1e-5;
    for (int i = 0; i < 40; ++i) {
        const double t = ut(rng), x = ux(rng);
        const PointReport r = classify_point(example(), t, Vec{x});
        if (r.verdict != PointVerdict::Regular) continue;
        const auto fd = fd_gradient(example(), t, Vec{x}, h);
        if (!fd) continue;
        CHECK(std::abs(fd->p - r.gradient->p) <= std::max(1e-3, 10 * h));
        CHECK(std::abs(fd->q[0] - r.gradient->q[0]) <= std::max(1e-3, 10 * h));
    }
    CHECK_FALSE(fd_gradient(example(), 1.0, Vec{0.0}, 1e-5));
}

TEST_CASE("membership examples") {
    const MembershipResult sub = membership_halfdiff(example(), 1.0, Vec{0.0}, 2 * std::log(2.0), Vec{0.0}, Side::Sub);
    CHECK(sub.verdict == Membership::Member);
    CHECK(sub.radii.size() == 10);
    CHECK(sub.directions == 32);
    CHECK(sub.radii.front() == 0.125);

    const MembershipResult sup = membership_halfdiff(example(), 1.0, Vec{0.0}, 2 * std::log(2.0), Vec{1.0}, Side::Super);
    CHECK(sup.verdict == Membership::NonMember);

    // Determinism of the seeded directions.
    const MembershipResult again = membership_halfdiff(example(), 1.0, Vec{0.0}, 2 * std::log(2.0), Vec{1.0}, Side::Super);
    CHECK(again.estimate == sup.estimate);
    CHECK_THROWS_AS(membership_halfdiff(example(), 0.0, Vec{0.0}, 0, Vec{0.0}, Side::Sub), PreconditionError);
}

TEST_CASE("reachable gradients lie in the subdifferential at a kink") {
    for (const auto& g : reachable_gradients(example(), 1.0, Vec{0.0}))
        CHECK(membership_halfdiff(example(), 1.0, Vec{0.0}, g.p, g.q, Side::Sub).verdict == Membership::Member);
}

TEST_CASE("sub and superdifferential coherence at regular points") {
    std::mt19937_64 rng(12);
    // Radii reach 1/8, so keep that far from t = 0, t = T and the singular segment x = 0, t > 1/sqrt2.
    std::uniform_real_distribution<double> ut(0.15, 1.85), ux(-3, 3);
    int checked = 0;
    while (checked < 6) {
        const double t = ut(rng), x = ux(rng);
        if (t > 0.55 && std::abs(x) < 0.5) continue;
        const PointReport r = classify_point(example(), t, Vec{x});
        REQUIRE(r.verdict == PointVerdict::Regular);
        ++checked;
        for (Side s : {Side::Super, Side::Sub})
            CHECK(membership_halfdiff(example(), t, Vec{x}, r.gradient->p, r.gradient->q, s).verdict ==
                  Membership::Member);
    }
}

TEST_CASE("injectivity of the characteristic map") {
    const Box yb = example().y_box();
    CHECK(injectivity_test(example(), 0.5, yb, 1024).injective);
    const InjectivityResult r = injectivity_test(example(), 1.0, yb, 1024);
    CHECK_FALSE(r.injective);
    REQUIRE(r.witness);
    const double a = r.witness->first[0], b = r.witness->second[0];
    CHECK(std::abs(std::abs(a) - 1) <= 1e-2);
    CHECK(std::abs(std::abs(b) - 1) <= 1e-2);
    CHECK(std::abs(example_curve(a, 1.0) - example_curve(b, 1.0)) <= 1e-3);
    for (double t : {0.3, 1.0, 1.9}) CHECK(injectivity_test(*catalog("zero").problem, t, Box::cube(1, -5, 5), 256).injective);
}

TEST_CASE("strip of differentiability") {
    const StripReport r = strip_scan(example(), Box::cube(1, -3, 3), 64, 128);
    CHECK(std::abs(r.t_star - 1 / std::sqrt(2.0)) <= 2.0 / 64);
    CHECK(r.t_levels == 64);
    CHECK(r.x_grid == 128);
    REQUIRE(r.levels.size() == 64);
    for (const StripLevel& lv : r.levels) {
        if (lv.t < r.t_star) {
            CHECK(lv.singleton_ok);
            CHECK(lv.injective_ok);
            CHECK(lv.all_type1_ok);
        }
    }
    // Coherence: interior samples of the strip classify Regular.
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> ut(0.01, r.t_star - 0.01), ux(-3, 3);
    for (int i = 0; i < 100; ++i)
        CHECK(classify_point(example(), ut(rng), Vec{ux(rng)}).verdict == PointVerdict::Regular);
}

TEST_CASE("no singularities for transport and the concave quadratic") {
    const auto tr = catalog("transport");
    CHECK(strip_scan(*tr.problem, tr.sample_box, 16, 32).t_star == tr.problem->horizon());
    const auto ab = catalog("anti-burgers");
    CHECK(strip_scan(*ab.problem, ab.sample_box, 16, 32).t_star == ab.problem->horizon());
    CHECK_THROWS_AS(strip_scan(example(), Box::cube(1, -3, 3), 1, 32), PreconditionError);
}

TEST_CASE("singularities propagate along the axis") {
    const SingularTrace tr = trace_singularities(example(), 0.75, Vec{0.0}, 0.05, 2.0);
    CHECK(tr.terminated == TraceEnd::ReachedEnd);
    CHECK(to_string(tr.terminated) == "reached_T");
    CHECK(tr.steps.back().t == 2.0);
    CHECK(tr.delta > 0);
    for (std::size_t k = 0; k < tr.steps.size(); ++k) {
        CHECK(std::abs(tr.steps[k].x[0]) <= 1e-3);
        CHECK(tr.steps[k].ell.points.size() >= 2);
        if (k > 0) {
            CHECK(tr.steps[k].t > tr.steps[k - 1].t);
            CHECK(distance(tr.steps[k].x, tr.steps[k - 1].x) <= tr.epsilon);
        }
    }
    CHECK_THROWS_AS(trace_singularities(example(), 0.5, Vec{0.0}, 0.05, 2.0), PreconditionError);
    CHECK_THROWS_AS(trace_singularities(*catalog("transport").problem, 1.0, Vec{1.0}, 0.05, 2.0), PreconditionError);
}

TEST_CASE("pde residual") {
    CHECK(pde_residual(example(), std::sqrt(2.0), Vec{0.4}, 1e-5) <= 1e-3);
    CHECK(pde_residual(*catalog("transport").problem, 1.0, Vec{3.0}) <= 1e-6);
    CHECK(pde_residual(*catalog("zero").problem, 1.0, Vec{0.3}) <= 1e-8);
    CHECK_THROWS_AS(pde_residual(example(), 1.0, Vec{0.0}), PreconditionError);
    CHECK_THROWS_AS(pde_residual(example(), 1.0, Vec{0.4}, 1.5), PreconditionError);
}

TEST_CASE("gradients of nearby regular points approach the reachable set") {
    const ApproachReport r = approachability(example(), 1.0, Vec{0.0}, 1e-3, 1000, 1e-2, 1e-7);
    CHECK(r.resolved);
    CHECK(r.stray == 0);
    REQUIRE(r.hits.size() == 2);
    CHECK(r.hits[0] > 0);
    CHECK(r.hits[1] > 0);
}
