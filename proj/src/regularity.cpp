#include "hjhopf/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hjhopf/parallel.hpp"

namespace hjhopf {
namespace {

constexpr int kCurveNodes = 1024;
constexpr double kStencilMatch = 1e-4;

void check_open_time(const HJProblem& prob, double t) {
    if (!(t > 0 && t < prob.horizon())) throw PreconditionError("t must lie in (0, T)");
}

double second_value(const MaximizerSet& ms) {
    std::vector<double> v = ms.values;
    std::sort(v.begin(), v.end(), std::greater<>());
    return v.size() >= 2 ? v[1] : kMinusInf;
}

struct Crossing {
    double x = 0.0;
    MaximizerSet ell;
};

// Between two regular neighbours with different maximizers, locate where the affine
// pieces x q_a - Phi(q_a) and x q_b - Phi(q_b) meet and look for a tie there. Each
// evaluation replaces the endpoint whose branch it lands on, so a jump in the
// maximizer is narrowed down like regula falsi; a continuous change stops after one.
std::optional<Crossing> refine_crossing(const HJProblem& prob, double t, double xa, double qa, double xb, double qb,
                                        int& evals) {
    const auto Phi = [&](double q) { return prob.sigma_star(Vec{q}) + cumulative_H(prob, Vec{q}, t); };
    const double merge = 10 * prob.cluster_radius();
    for (int it = 0; it < 60; ++it) {
        if (std::abs(qa - qb) <= merge) return std::nullopt;
        const double pa = Phi(qa), pb = Phi(qb);
        if (!std::isfinite(pa) || !std::isfinite(pb)) return std::nullopt;
        const double xc = (pa - pb) / (qa - qb);
        if (!(xc > xa && xc < xb)) return std::nullopt;
        MaximizerSet ms = evaluate(prob, t, Vec{xc});
        ++evals;
        if (ms.points.size() >= 2) return Crossing{xc, std::move(ms)};
        const double fa = phi(prob, t, Vec{xc}, Vec{qa});
        const double fb = phi(prob, t, Vec{xc}, Vec{qb});
        const double floor = ms.value - ms.value_tolerance;
        if (fa >= floor && fb >= floor) {
            ms.points = {Vec{std::min(qa, qb)}, Vec{std::max(qa, qb)}};
            ms.values = qa < qb ? std::vector<double>{fa, fb} : std::vector<double>{fb, fa};
            ms.value = std::max({ms.value, fa, fb});
            ms.cluster_count = std::max(ms.cluster_count, 2);
            return Crossing{xc, std::move(ms)};
        }
        const double qc = ms.points.front()[0];
        const double da = std::abs(qc - qa), db = std::abs(qc - qb);
        if (da <= db / 4) {
            xa = xc;
            qa = qc;
        } else if (db <= da / 4) {
            xb = xc;
            qb = qc;
        } else {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

// Monotonicity witness on a sampled curve: a pair of initial points on either side of
// the first fold whose images coincide at the fold's mid level.
InjectivityResult injectivity_on(const CurveGrid& g) {
    InjectivityResult out;
    out.grid = static_cast<int>(g.y.size());
    const std::size_t m = g.y.size();
    if (m < 2) return out;
    const double dir = g.x[1] > g.x[0] ? 1.0 : -1.0;
    std::size_t fold = m;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        if (!(dir * (g.x[i + 1] - g.x[i]) > 0)) {
            fold = i;
            break;
        }
    }
    if (fold == m) return out;
    out.injective = false;
    std::size_t end = fold;
    while (end + 1 < m && !(dir * (g.x[end + 1] - g.x[end]) > 0)) ++end;
    const double level = 0.5 * (g.x[fold] + g.x[end]);
    const auto crossing = [&](std::size_t i) {
        const double d = g.x[i + 1] - g.x[i];
        const double s = d == 0 ? 0.0 : (level - g.x[i]) / d;
        return g.y[i] + std::clamp(s, 0.0, 1.0) * (g.y[i + 1] - g.y[i]);
    };
    double ya = g.y[fold], yb = g.y[end];
    for (std::size_t i = fold; i-- > 0;) {
        if ((g.x[i] - level) * (g.x[i + 1] - level) <= 0) {
            ya = crossing(i);
            break;
        }
    }
    for (std::size_t i = end; i + 1 < m; ++i) {
        if ((g.x[i] - level) * (g.x[i + 1] - level) <= 0) {
            yb = crossing(i);
            break;
        }
    }
    out.witness = std::make_pair(Vec{ya}, Vec{yb});
    return out;
}

StripLevel scan_level_1d(const HJProblem& prob, double t, const std::vector<double>& xs, int& refinements) {
    StripLevel level;
    level.t = t;
    const auto ells = parallel_map(xs.size(), [&](std::size_t i) { return evaluate(prob, t, Vec{xs[i]}); });
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (classify_from(prob, t, Vec{xs[i]}, ells[i]).verdict != PointVerdict::Regular) level.singleton_ok = false;
    if (level.singleton_ok) {
        const auto found = parallel_map(xs.size() - 1, [&](std::size_t i) -> std::pair<int, int> {
            int evals = 0;
            const auto c = refine_crossing(prob, t, xs[i], ells[i].points.front()[0], xs[i + 1],
                                           ells[i + 1].points.front()[0], evals);
            return {c ? 1 : 0, evals};
        });
        for (const auto& [hit, evals] : found) {
            refinements += evals;
            if (hit) level.singleton_ok = false;
        }
    }

    const CurveGrid curves = sample_curves(prob, t, prob.y_box(), kCurveNodes);
    level.injective_ok = injectivity_on(curves).injective;
    const auto type1 = parallel_map(xs.size(), [&](std::size_t i) -> int {
        const InitialPoints roots = ell_star_on(prob, curves, xs[i]);
        if (roots.roots.empty()) return 0;
        for (const Vec& y : roots.roots)
            if (classify_char(prob, t, Vec{xs[i]}, y, ells[i]).kind != CharType::TypeI) return 0;
        return 1;
    });
    level.all_type1_ok = std::all_of(type1.begin(), type1.end(), [](int v) { return v == 1; });
    return level;
}

StripLevel scan_level_nd(const HJProblem& prob, double t, const std::vector<Vec>& xs) {
    StripLevel level;
    level.t = t;
    const auto verdicts = parallel_map(xs.size(), [&](std::size_t i) -> int {
        const PointReport r = classify_from(prob, t, xs[i], evaluate(prob, t, xs[i]));
        if (r.verdict != PointVerdict::Regular) return 0;
        try {
            for (const Vec& y : ell_star(prob, t, xs[i]).roots)
                if (classify_char(prob, t, xs[i], y, r.ell).kind != CharType::TypeI) return 1;
        } catch (const NumericError&) {
            return 1;
        }
        return 2;
    });
    for (int v : verdicts) {
        if (v == 0) level.singleton_ok = false;
        if (v < 2) level.all_type1_ok = false;
    }
    level.injective_ok = injectivity_test(prob, t, prob.y_box(), prob.dim() == 2 ? 48 : 16).injective;
    return level;
}

std::vector<Vec> unit_directions(int dim, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<Vec> out;
    while (static_cast<int>(out.size()) < count) {
        std::vector<double> d(static_cast<std::size_t>(dim));
        double len = 0;
        for (double& c : d) {
            c = normal(rng);
            len += c * c;
        }
        len = std::sqrt(len);
        if (len < 1e-12) continue;
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = d[static_cast<std::size_t>(i)] / len;
        out.push_back(v);
    }
    return out;
}

}  // namespace

std::string to_string(PointVerdict v) {
    switch (v) {
    case PointVerdict::Regular: return "regular";
    case PointVerdict::Singular: return "singular";
    case PointVerdict::Borderline: return "borderline";
    }
    return "singular";
}

std::string to_string(Side s) { return s == Side::Super ? "super" : "sub"; }

std::string to_string(Membership m) {
    switch (m) {
    case Membership::Member: return "member";
    case Membership::NonMember: return "non_member";
    case Membership::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string to_string(TraceEnd e) { return e == TraceEnd::ReachedEnd ? "reached_T" : "gap"; }

PointReport classify_from(const HJProblem& prob, double t, const Vec& x, MaximizerSet ell) {
    PointReport r;
    r.t = t;
    r.x = x;
    r.u = ell.value;
    for (const Vec& q : ell.points) r.reachable.push_back({-prob.H(t, q), q});
    if (ell.points.size() >= 2) {
        r.verdict = PointVerdict::Singular;
    } else if (ell.runner_up && *ell.runner_up >= ell.value - 10 * ell.value_tolerance) {
        r.verdict = PointVerdict::Borderline;
    } else {
        r.verdict = PointVerdict::Regular;
        r.gradient = r.reachable.front();
    }
    r.ell = std::move(ell);
    return r;
}

PointReport classify_point(const HJProblem& prob, double t, const Vec& x) {
    check_open_time(prob, t);
    return classify_from(prob, t, x, evaluate(prob, t, x));
}

std::vector<GradientPair> reachable_gradients(const HJProblem& prob, double t0, const Vec& x0) {
    return classify_point(prob, t0, x0).reachable;
}

MembershipResult membership_halfdiff(const HJProblem& prob, double t0, const Vec& x0, double p, const Vec& q,
                                     Side side, std::uint64_t seed) {
    check_open_time(prob, t0);
    if (q.size() != prob.dim()) throw ConfigError("q has the wrong dimension");
    const int n = prob.dim();
    const std::vector<Vec> dirs = unit_directions(n + 1, 32, seed);
    const double u0 = evaluate(prob, t0, x0).value;
    MembershipResult out;
    out.directions = static_cast<int>(dirs.size());
    for (int j = 3; j <= 12; ++j) {
        const double rho = std::ldexp(1.0, -j);
        const auto quotients = parallel_map(dirs.size(), [&](std::size_t d) -> std::optional<double> {
            const double h = rho * dirs[d][0];
            Vec k(n);
            for (int i = 0; i < n; ++i) k[i] = rho * dirs[d][i + 1];
            if (!(t0 + h > 0 && t0 + h < prob.horizon())) return std::nullopt;
            const double u = evaluate(prob, t0 + h, x0 + k).value;
            return (u - u0 - p * h - dot(q, k)) / rho;
        });
        double extreme = side == Side::Super ? -INFINITY : INFINITY;
        bool any = false;
        for (const auto& v : quotients) {
            if (!v) continue;
            any = true;
            extreme = side == Side::Super ? std::max(extreme, *v) : std::min(extreme, *v);
        }
        if (!any) return out;
        out.radii.push_back(rho);
        out.extremes.push_back(extreme);
        if (out.extremes.size() >= 2)
            out.extrapolated.push_back(2 * out.extremes.back() - out.extremes[out.extremes.size() - 2]);
    }
    if (out.extrapolated.size() < 4) return out;
    const auto tail = std::vector<double>(out.extrapolated.end() - 4, out.extrapolated.end());
    const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
    out.estimate = out.extrapolated.back();
    if (*hi - *lo > 1e-2) return out;
    const bool member = side == Side::Super ? out.estimate <= 1e-3 : out.estimate >= -1e-3;
    out.verdict = member ? Membership::Member : Membership::NonMember;
    return out;
}

InjectivityResult injectivity_test(const HJProblem& prob, double t, const Box& y_box, int grid) {
    check_open_time(prob, t);
    if (grid < 2) throw PreconditionError("injectivity grid needs at least 2 nodes");
    if (prob.dim() == 1) return injectivity_on(sample_curves(prob, t, y_box, grid));

    InjectivityResult out;
    out.grid = grid;
    out.best_effort = true;
    const std::vector<Vec> ys = tensor_grid(y_box, grid);
    const auto xs = parallel_map(ys.size(), [&](std::size_t i) { return curve_point(prob, ys[i], t); });
    std::vector<std::size_t> order(ys.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a][0] < xs[b][0]; });
    const double thr = 1e-8 * y_box.diameter();
    for (std::size_t a = 0; a < order.size(); ++a) {
        for (std::size_t b = a + 1; b < order.size() && xs[order[b]][0] - xs[order[a]][0] <= thr; ++b) {
            if (distance(xs[order[a]], xs[order[b]]) <= thr) {
                out.injective = false;
                out.witness = std::make_pair(ys[std::min(order[a], order[b])], ys[std::max(order[a], order[b])]);
                return out;
            }
        }
    }
    return out;
}

StripReport strip_scan(const HJProblem& prob, const Box& x_box, int t_levels, int x_grid) {
    if (t_levels < 2) throw PreconditionError("strip scan needs at least 2 time levels");
    if (x_grid < 2) throw PreconditionError("strip scan needs at least 2 x-grid points");
    if (x_box.dim() != prob.dim()) throw ConfigError("x box dimension mismatch");
    StripReport report;
    report.t_levels = t_levels;
    report.x_grid = x_grid;
    report.curve_nodes = prob.dim() == 1 ? kCurveNodes : 0;
    report.t_star = prob.horizon();
    const std::vector<double> xs1 = prob.dim() == 1 ? linspace(x_box.lo[0], x_box.hi[0], x_grid) : std::vector<double>{};
    const std::vector<Vec> xsn = prob.dim() == 1 ? std::vector<Vec>{} : tensor_grid(x_box, x_grid);
    bool failed = false;
    for (int k = 1; k <= t_levels; ++k) {
        const double t = prob.horizon() * k / (t_levels + 1);
        StripLevel level = prob.dim() == 1 ? scan_level_1d(prob, t, xs1, report.refinements) : scan_level_nd(prob, t, xsn);
        if (!level.singleton_ok && !failed) {
            failed = true;
            report.t_star = t;
        }
        report.levels.push_back(level);
    }
    return report;
}

SingularTrace trace_singularities(const HJProblem& prob, double t0, const Vec& x0, double eps, double t_end) {
    check_open_time(prob, t0);
    if (!(eps > 0)) throw PreconditionError("eps must be positive");
    if (!(t_end > t0 && t_end <= prob.horizon())) throw PreconditionError("t_end must lie in (t0, T]");
    PointReport seed = classify_point(prob, t0, x0);
    if (seed.verdict != PointVerdict::Singular)
        throw PreconditionError("seed point is " + to_string(seed.verdict) + ", not singular");

    const int n = prob.dim();
    double sup_hp = 0;
    {
        const std::vector<Vec> qs = tensor_grid(prob.q_box(), n == 1 ? 64 : (n == 2 ? 16 : 8));
        for (double t : linspace(t0, t_end, 64))
            for (const Vec& q : qs) sup_hp = std::max(sup_hp, norm(prob.H_p(t, q)));
    }
    SingularTrace trace;
    trace.t0 = t0;
    trace.x0 = x0;
    trace.epsilon = eps;
    trace.t_end = t_end;
    trace.delta = std::min(sup_hp > 0 ? eps / sup_hp : INFINITY, (t_end - t0) / 8);
    trace.ball_grid = n == 1 ? 128 : (n == 2 ? 24 : 10);
    trace.steps.push_back({t0, x0, std::move(seed.ell)});

    const auto search = [&](double t, const Vec& center, int per_axis) -> std::optional<TraceStep> {
        std::vector<Vec> pts;
        for (const Vec& x : tensor_grid(Box(center - Vec(n, eps), center + Vec(n, eps)), per_axis))
            if (distance(x, center) <= eps) pts.push_back(x);
        const auto ells = parallel_map(pts.size(), [&](std::size_t i) { return evaluate(prob, t, pts[i]); });
        std::optional<TraceStep> best;
        const auto offer = [&](const Vec& x, const MaximizerSet& ms) {
            if (ms.points.size() < 2) return;
            if (!best || second_value(ms) > second_value(best->ell)) best = TraceStep{t, x, ms};
        };
        for (std::size_t i = 0; i < pts.size(); ++i) offer(pts[i], ells[i]);
        if (n == 1) {
            const auto found = parallel_map(pts.size() - 1, [&](std::size_t i) -> std::optional<Crossing> {
                if (!ells[i].singleton() || !ells[i + 1].singleton()) return std::nullopt;
                int evals = 0;
                return refine_crossing(prob, t, pts[i][0], ells[i].points.front()[0], pts[i + 1][0],
                                       ells[i + 1].points.front()[0], evals);
            });
            for (const auto& c : found)
                if (c) offer(Vec{c->x}, c->ell);
        }
        return best;
    };

    double t = t0;
    while (t < t_end) {
        const double next = t_end - t <= 1e-12 * t_end ? t_end : std::min(t + trace.delta, t_end);
        const Vec& prev = trace.steps.back().x;
        std::optional<TraceStep> step = search(next, prev, trace.ball_grid);
        if (!step) step = search(next, prev, 2 * trace.ball_grid - 1);
        if (!step) {
            trace.terminated = TraceEnd::Gap;
            trace.gap_time = next;
            return trace;
        }
        trace.steps.push_back(std::move(*step));
        t = next;
    }
    trace.terminated = TraceEnd::ReachedEnd;
    return trace;
}

std::optional<GradientPair> fd_gradient(const HJProblem& prob, double t, const Vec& x, double h) {
    if (!(h > 0)) throw PreconditionError("step must be positive");
    if (t - h < 0 || t + h > prob.horizon()) return std::nullopt;
    const MaximizerSet c = evaluate(prob, t, x);
    if (!c.singleton()) return std::nullopt;
    const Vec qc = c.points.front();
    const int n = prob.dim();
    std::vector<std::pair<double, Vec>> stencil{{t + h, x}, {t - h, x}};
    for (int i = 0; i < n; ++i) {
        Vec a = x, b = x;
        a[i] += h;
        b[i] -= h;
        stencil.emplace_back(t, a);
        stencil.emplace_back(t, b);
    }
    std::vector<double> u;
    for (const auto& [ts, xs] : stencil) {
        const MaximizerSet ms = evaluate(prob, ts, xs);
        if (!ms.singleton() || distance(ms.points.front(), qc) > kStencilMatch) return std::nullopt;
        u.push_back(ms.value);
    }
    GradientPair g;
    g.p = (u[0] - u[1]) / (2 * h);
    g.q = Vec(n);
    for (int i = 0; i < n; ++i) g.q[i] = (u[2 + 2 * i] - u[3 + 2 * i]) / (2 * h);
    return g;
}

double pde_residual(const HJProblem& prob, double t, const Vec& x, std::optional<double> h) {
    const double step = h.value_or(1e-5 * (1 + norm(x)));
    if (!(step > 0)) throw PreconditionError("step must be positive");
    const PointReport r = classify_point(prob, t, x);
    if (r.verdict != PointVerdict::Regular)
        throw PreconditionError("pde residual needs a regular point, got " + to_string(r.verdict));
    if (t - step < 0 || t + step > prob.horizon())
        throw PreconditionError("finite-difference stencil crosses t = 0 or t = T");
    const int n = prob.dim();
    const double ut = (evaluate(prob, t + step, x).value - evaluate(prob, t - step, x).value) / (2 * step);
    Vec ux(n);
    for (int i = 0; i < n; ++i) {
        Vec a = x, b = x;
        a[i] += step;
        b[i] -= step;
        ux[i] = (evaluate(prob, t, a).value - evaluate(prob, t, b).value) / (2 * step);
    }
    return std::abs(ut + prob.H(t, ux));
}

ApproachReport approachability(const HJProblem& prob, double t0, const Vec& x0, double radius, int samples,
                               double tol, double h, std::uint64_t seed) {
    ApproachReport out;
    out.targets = reachable_gradients(prob, t0, x0);
    out.hits.assign(out.targets.size(), 0);
    out.samples = samples;
    const int n = prob.dim();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<std::pair<double, Vec>> pts;
    while (static_cast<int>(pts.size()) < samples) {
        const double dt = radius * unit(rng);
        Vec dx(n);
        for (int i = 0; i < n; ++i) dx[i] = radius * unit(rng);
        if (dt * dt + dot(dx, dx) > radius * radius) continue;
        pts.emplace_back(t0 + dt, x0 + dx);
    }
    const auto grads = parallel_map(pts.size(), [&](std::size_t i) -> std::optional<GradientPair> {
        const auto& [t, x] = pts[i];
        if (!(t > 0 && t < prob.horizon())) return std::nullopt;
        return fd_gradient(prob, t, x, h);
    });
    for (const auto& g : grads) {
        if (!g) continue;
        out.sampled.push_back(*g);
        bool matched = false;
        for (std::size_t k = 0; k < out.targets.size(); ++k) {
            const double d = std::hypot(g->p - out.targets[k].p, distance(g->q, out.targets[k].q));
            if (d <= tol) {
                ++out.hits[k];
                matched = true;
            }
        }
        if (!matched) ++out.stray;
    }
    out.resolved = !out.targets.empty() && std::all_of(out.hits.begin(), out.hits.end(), [](int c) { return c > 0; });
    return out;
}

}  // namespace hjhopf
