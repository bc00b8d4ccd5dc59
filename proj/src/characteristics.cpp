#include "hjhopf/characteristics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "hjhopf/parallel.hpp"
#include "hjhopf/quadrature.hpp"

namespace hjhopf {
namespace {

constexpr double kResidualTol = 1e-6;

void check_time(const HJProblem& prob, double t) {
    if (!(t >= 0 && t <= prob.horizon())) throw PreconditionError("time outside [0, T]");
}

// Solves a small dense system in place; returns false when singular.
bool solve(std::array<std::array<double, kMaxDim>, kMaxDim> a, Vec b, int n, Vec& out) {
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (std::abs(a[piv][c]) < 1e-300) return false;
        std::swap(a[piv], a[c]);
        std::swap(b[piv], b[c]);
        for (int r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    out = Vec(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < n; ++k) s -= a[r][k] * out[k];
        out[r] = s / a[r][r];
    }
    return true;
}

double refine_root_1d(const HJProblem& prob, double t, double x0, double a, double b, double ra) {
    const auto r = [&](double y) { return curve_point(prob, Vec{y}, t)[0] - x0; };
    for (int it = 0; it < 200 && b - a > 1e-10; ++it) {
        const double m = 0.5 * (a + b);
        const double rm = r(m);
        if (rm == 0) return m;
        if ((rm > 0) == (ra > 0)) {
            a = m;
            ra = rm;
        } else {
            b = m;
        }
    }
    // Newton polish inside the final bracket.
    double y = 0.5 * (a + b);
    double ry = r(y);
    for (int it = 0; it < 5 && ry != 0; ++it) {
        const double h = 1e-7 * (1 + std::abs(y));
        const double d = (r(y + h) - r(y - h)) / (2 * h);
        if (d == 0 || !std::isfinite(d)) break;
        const double yn = y - ry / d;
        if (yn < a - 1e-10 || yn > b + 1e-10) break;
        const double rn = r(yn);
        if (std::abs(rn) >= std::abs(ry)) break;
        y = yn;
        ry = rn;
    }
    return y;
}

InitialPoints ell_star_nd(const HJProblem& prob, double t0, const Vec& x0, const Box& y_box) {
    const int n = prob.dim();
    const int per_axis = n == 2 ? 32 : 16;
    const std::vector<Vec> seeds = tensor_grid(y_box, per_axis);
    const auto residual = [&](const Vec& y) { return curve_point(prob, y, t0) - x0; };
    const auto starts = parallel_map(seeds.size(), [&](std::size_t s) -> std::optional<Vec> {
        Vec y = seeds[s];
        Vec r;
        try {
            r = residual(y);
        } catch (const DomainError&) {
            return std::nullopt;
        }
        for (int it = 0; it < 50; ++it) {
            if (norm(r) <= 1e-12 * (1 + norm(x0))) break;
            std::array<std::array<double, kMaxDim>, kMaxDim> jac{};
            for (int j = 0; j < n; ++j) {
                const double h = 1e-7 * (1 + std::abs(y[j]));
                Vec a = y, b = y;
                a[j] -= h;
                b[j] += h;
                const Vec d = (1.0 / (2 * h)) * (residual(b) - residual(a));
                for (int i = 0; i < n; ++i) jac[i][j] = d[i];
            }
            Vec step;
            if (!solve(jac, r, n, step)) return std::nullopt;
            double alpha = 1.0;
            bool moved = false;
            for (int ls = 0; ls < 30; ++ls, alpha *= 0.5) {
                const Vec yn = y - alpha * step;
                Vec rn;
                try {
                    rn = residual(yn);
                } catch (const DomainError&) {
                    continue;
                }
                if (norm(rn) < norm(r)) {
                    y = yn;
                    r = rn;
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
        }
        if (norm(r) > kResidualTol || !y_box.contains(y, 1e-9 * y_box.diameter())) return std::nullopt;
        return y;
    });
    InitialPoints out;
    out.best_effort = true;
    out.seeds = static_cast<int>(seeds.size());
    for (const auto& s : starts) {
        if (!s) continue;
        bool dup = false;
        for (const Vec& r : out.roots) dup = dup || distance(r, *s) <= 1e-6 * (1 + norm(r));
        if (dup) continue;
        out.roots.push_back(*s);
        out.residuals.push_back(norm(residual(*s)));
    }
    return out;
}

}  // namespace

Characteristic make_characteristic(const HJProblem& prob, const Vec& y) {
    return {y, prob.sigma().sigma_gradient(y)};
}

Vec curve_point(const HJProblem& prob, const Vec& y, double t) {
    check_time(prob, t);
    return y + cumulative_H_p(prob, prob.sigma().sigma_gradient(y), t);
}

double classical_value(const HJProblem& prob, const Vec& y, double t) {
    check_time(prob, t);
    const Vec p = prob.sigma().sigma_gradient(y);
    const double integral = adaptive_simpson<double>(
        [&](double tau) { return dot(prob.H_p(tau, p), p) - prob.H(tau, p); }, 0.0, t);
    return prob.sigma().sigma_value(y) + integral;
}

BackwardResult backward_initial(const HJProblem& prob, double t0, const Vec& x0, const Vec& p0) {
    if (!prob.q_box().contains(p0)) throw PreconditionError("p0 lies outside the q-box");
    BackwardResult out;
    out.y = x0 - cumulative_H_p(prob, p0, t0);
    out.momentum_mismatch = distance(prob.sigma().sigma_gradient(out.y), p0);
    out.mismatch_warning = out.momentum_mismatch > 1e-6;
    return out;
}

CurveGrid sample_curves(const HJProblem& prob, double t, const Box& y_box, int nodes) {
    if (prob.dim() != 1) throw PreconditionError("curve grids are one-dimensional");
    CurveGrid g;
    g.t = t;
    g.y = linspace(y_box.lo[0], y_box.hi[0], nodes);
    g.x.resize(g.y.size());
    for (std::size_t i = 0; i < g.y.size(); ++i) g.x[i] = curve_point(prob, Vec{g.y[i]}, t)[0];
    return g;
}

InitialPoints ell_star_on(const HJProblem& prob, const CurveGrid& grid, double x0) {
    InitialPoints out;
    out.seeds = static_cast<int>(grid.y.size());
    for (std::size_t i = 0; i < grid.y.size(); ++i) {
        const double ri = grid.x[i] - x0;
        if (ri == 0) {
            out.roots.push_back(Vec{grid.y[i]});
            continue;
        }
        if (i + 1 < grid.y.size()) {
            const double rn = grid.x[i + 1] - x0;
            if (rn != 0 && (ri > 0) != (rn > 0))
                out.roots.push_back(Vec{refine_root_1d(prob, grid.t, x0, grid.y[i], grid.y[i + 1], ri)});
        }
    }
    for (const Vec& y : out.roots) out.residuals.push_back(std::abs(curve_point(prob, y, grid.t)[0] - x0));
    return out;
}

InitialPoints ell_star(const HJProblem& prob, double t0, const Vec& x0, const Box& y_box) {
    if (!(t0 > 0 && t0 < prob.horizon())) throw PreconditionError("t0 must lie in (0, T)");
    if (x0.size() != prob.dim() || y_box.dim() != prob.dim()) throw ConfigError("dimension mismatch");
    InitialPoints out = prob.dim() == 1 ? ell_star_on(prob, sample_curves(prob, t0, y_box, 1024), x0[0])
                                        : ell_star_nd(prob, t0, x0, y_box);
    if (out.roots.empty())
        throw NumericError("no initial point found for the characteristic through this point "
                           "(resolution failure: ell(t,x) must lie in grad sigma(ell*))");
    return out;
}

InitialPoints ell_star(const HJProblem& prob, double t0, const Vec& x0) {
    return ell_star(prob, t0, x0, prob.y_box());
}

std::string to_string(CharType k) { return k == CharType::TypeI ? "I" : "II"; }

CharClassification classify_char(const HJProblem& prob, double t0, const Vec& x0, const Vec& y,
                                 const MaximizerSet& ell) {
    const double residual = distance(curve_point(prob, y, t0), x0);
    if (residual > kResidualTol)
        throw PreconditionError("y is not an initial point of a characteristic through (t0,x0): residual " +
                                std::to_string(residual));
    CharClassification out;
    out.t0 = t0;
    out.x0 = x0;
    out.y = y;
    out.witness = ell;
    out.distance = ell.distance_to(prob.sigma().sigma_gradient(y));
    const double tol = prob.match_tolerance();
    out.kind = out.distance <= tol ? CharType::TypeI : CharType::TypeII;
    out.borderline = out.distance >= 0.5 * tol && out.distance <= 2.0 * tol;
    return out;
}

CharClassification classify_char(const HJProblem& prob, double t0, const Vec& x0, const Vec& y) {
    return classify_char(prob, t0, x0, y, evaluate(prob, t0, x0));
}

ThetaResult transition_theta(const HJProblem& prob, double t0, const Vec& x0, const Vec& y0) {
    if (prob.a2().kind == A2Kind::Unclassified)
        throw PreconditionError("the transition time needs a classified Hamiltonian (convex, concave or separable)");
    if (classify_char(prob, t0, x0, y0).kind != CharType::TypeII)
        throw PreconditionError("the characteristic is of type I at (t0,x0)");

    const Vec p = prob.sigma().sigma_gradient(y0);
    ThetaResult out;
    const auto predicate = [&](double s) {
        const MaximizerSet ms = evaluate(prob, s, curve_point(prob, y0, s));
        const bool sole = ms.singleton() && distance(ms.points.front(), p) <= prob.match_tolerance();
        out.probes.emplace_back(s, sole);
        return sole;
    };
    const auto report = [&](const std::string& why) {
        std::ostringstream os;
        os.precision(17);
        os << why << "; probes:";
        for (const auto& [s, v] : out.probes) os << " (" << s << ", " << (v ? "true" : "false") << ")";
        return NumericError(os.str());
    };

    constexpr int kScan = 16;
    double lo = 0.0, hi = t0;
    bool seen_false = false;
    int alternations = 0;
    for (int k = 0; k <= kScan; ++k) {
        const double s = t0 * k / kScan;
        const bool v = predicate(s);
        if (k > 0 && v != out.probes[out.probes.size() - 2].second) ++alternations;
        if (v && !seen_false) lo = s;
        if (!v && !seen_false) {
            seen_false = true;
            hi = s;
        }
    }
    if (alternations >= 3) throw report("predicate is not monotone along the characteristic");
    if (!out.probes.front().second) throw report("momentum is not the sole maximizer at t = 0");
    while (hi - lo > 1e-6 * t0) {
        const double mid = 0.5 * (lo + hi);
        if (predicate(mid)) lo = mid;
        else hi = mid;
    }
    out.lo = lo;
    out.hi = hi;
    return out;
}

}  // namespace hjhopf
