#include "hjhopf/problem.hpp"

#include <cmath>
#include <random>

namespace hjhopf {
namespace {

using expr::Bindings;
using expr::Expr;
using expr::VarKind;

Bindings tp(int n, double t, const Vec& p) {
    Bindings b(n);
    b.t = t;
    b.p = p;
    return b;
}

void validate_a2(const ProblemSpec& s) {
    const int n = s.q_box.dim();
    std::mt19937_64 rng(0xa2a2'a2a2);
    const auto draw_t = [&] { return std::uniform_real_distribution<double>(0.0, s.T)(rng); };
    const auto draw_p = [&] {
        Vec p(n);
        for (int i = 0; i < n; ++i)
            p[i] = std::uniform_real_distribution<double>(s.q_box.lo[i], s.q_box.hi[i])(rng);
        return p;
    };
    const auto H = [&](double t, const Vec& p) { return s.H.eval(tp(n, t, p)); };

    switch (s.a2.kind) {
    case A2Kind::Unclassified:
        return;
    case A2Kind::Separable: {
        if (!s.a2.parts) throw ConfigError("separable class needs g, h and k");
        const auto& [g, h, k] = *s.a2.parts;
        if (g.depends_on(VarKind::Momentum) || k.depends_on(VarKind::Momentum) ||
            h.depends_on(VarKind::Time) || g.depends_on(VarKind::Space) || h.depends_on(VarKind::Space) ||
            k.depends_on(VarKind::Space))
            throw ConfigError("separable parts must be g(t), h(p), k(t)");
        for (int i = 0; i < 1000; ++i) {
            const double t = draw_t();
            const Vec p = draw_p();
            const Bindings b = tp(n, t, p);
            const double hv = H(t, p);
            const double r = hv - g.eval(b) * h.eval(b) - k.eval(b);
            if (std::abs(r) > 1e-9 + 1e-12 * std::abs(hv))
                throw ConfigError("H differs from g(t)h(p)+k(t) at a sampled point");
        }
        int sign = 0;
        for (int i = 0; i < 1000; ++i) {
            const double t = s.T * (i + 0.5) / 1000.0;
            const double gv = g.eval(tp(n, t, Vec(n)));
            const int si = gv > 0 ? 1 : (gv < 0 ? -1 : 0);
            if (si == 0 || (sign != 0 && si != sign)) throw ConfigError("g changes sign on (0,T)");
            sign = si;
        }
        return;
    }
    case A2Kind::ConvexInP:
    case A2Kind::ConcaveInP:
    case A2Kind::StrictlyConcaveInP: {
        const double orient = s.a2.kind == A2Kind::ConvexInP ? 1.0 : -1.0;
        for (int i = 0; i < 1000; ++i) {
            const double t = draw_t();
            const Vec a = draw_p(), b = draw_p();
            const double fa = H(t, a), fb = H(t, b), fm = H(t, 0.5 * (a + b));
            const double gap = orient * (0.5 * (fa + fb) - fm);
            if (gap < -1e-9 - 1e-12 * (std::abs(fa) + std::abs(fb)))
                throw ConfigError("H(t,.) fails the sampled midpoint " +
                                  std::string(orient > 0 ? "convexity" : "concavity") + " check");
        }
        return;
    }
    }
}

}  // namespace

std::string to_string(A2Kind k) {
    switch (k) {
    case A2Kind::ConvexInP: return "convex";
    case A2Kind::ConcaveInP: return "concave";
    case A2Kind::StrictlyConcaveInP: return "strictly-concave";
    case A2Kind::Separable: return "separable";
    case A2Kind::Unclassified: return "unclassified";
    }
    return "unclassified";
}

A2Kind a2_kind_from_string(const std::string& s) {
    for (A2Kind k : {A2Kind::ConvexInP, A2Kind::ConcaveInP, A2Kind::StrictlyConcaveInP, A2Kind::Separable,
                     A2Kind::Unclassified})
        if (to_string(k) == s) return k;
    throw ConfigError("unknown a2 class '" + s + "'");
}

HJProblem::HJProblem(ProblemSpec spec)
    : spec_(std::move(spec)), memo_(std::make_shared<QuadratureCache>()),
      vector_memo_(std::make_shared<MemoTable<Vec>>()) {
    if (!(spec_.T > 0) || !std::isfinite(spec_.T)) throw ConfigError("horizon T must be positive");
    if (!spec_.sigma) throw ConfigError("problem has no initial datum");
    if (spec_.H.empty()) throw ConfigError("problem has no Hamiltonian");
    const int n = spec_.q_box.dim();
    if (n < 1) throw ConfigError("q box is missing");
    if (spec_.H.dim() != n || spec_.sigma->dim() != n) throw ConfigError("dimension mismatch between H, sigma and q box");
    if (spec_.H.depends_on(VarKind::Space)) throw ConfigError("H may depend on t and p only");
    if (spec_.sigma_star && spec_.sigma_star->dim() != n) throw ConfigError("sigma* dimension mismatch");
    validate_a2(spec_);

    if (spec_.y_box) {
        if (spec_.y_box->dim() != n) throw ConfigError("y box dimension mismatch");
        y_box_ = *spec_.y_box;
    } else {
        y_box_ = spec_.sigma->x_box();
        if (spec_.sigma_star) {
            // Per-axis image of the q-box under dsigma*, taken through the box center.
            Vec lo(n), hi(n);
            bool ok = true;
            for (int i = 0; i < n && ok; ++i) {
                Vec a = spec_.q_box.center(), b = a;
                a[i] = spec_.q_box.lo[i];
                b[i] = spec_.q_box.hi[i];
                try {
                    lo[i] = sigma_star_gradient(a)[i];
                    hi[i] = sigma_star_gradient(b)[i];
                } catch (const DomainError&) {
                    ok = false;
                }
                ok = ok && std::isfinite(lo[i]) && std::isfinite(hi[i]) && lo[i] < hi[i];
            }
            if (ok) y_box_ = Box(lo, hi);
        }
    }
}

double HJProblem::H(double t, const Vec& p) const { return spec_.H.eval(tp(dim(), t, p)); }

Vec HJProblem::H_p(double t, const Vec& p) const {
    return spec_.H.gradient(VarKind::Momentum, tp(dim(), t, p));
}

double HJProblem::H_t(double t, const Vec& p) const {
    return spec_.H.derivative(expr::Variable{VarKind::Time, 0, 't'}, tp(dim(), t, p));
}

double HJProblem::sigma_star(const Vec& q) const {
    if (spec_.sigma_star) {
        Bindings b(dim());
        b.p = q;
        try {
            return spec_.sigma_star->eval(b);
        } catch (const DomainError&) {
            return kPlusInf;
        }
    }
    return conjugate_value(*spec_.sigma, q);
}

Vec HJProblem::sigma_star_gradient(const Vec& q) const {
    if (spec_.sigma_star) {
        Bindings b(dim());
        b.p = q;
        return spec_.sigma_star->gradient(VarKind::Momentum, b);
    }
    return conjugate_gradient(*spec_.sigma, q);
}

std::vector<std::string> catalog_names() {
    return {"paper-example", "transport", "zero", "anti-burgers", "lipschitz-sigma"};
}

CatalogEntry catalog(const std::string& name, const std::map<std::string, double>& params) {
    for (const auto& [key, value] : params)
        if (key != "T" && key != "q_lo" && key != "q_hi")
            throw ConfigError("unknown catalog parameter '" + key + "'");
    const auto param = [&](const char* key, double fallback) {
        const auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    const auto quadratic_sigma = [] {
        return std::make_shared<const ConvexData>(Expr::parse("x1^2/2", 1), Box::cube(1, -20, 20),
                                                  Expr::parse("q1^2/2", 1));
    };

    ProblemSpec s;
    s.name = name;
    CatalogEntry entry;
    if (name == "paper-example") {
        s.T = param("T", 2.0);
        s.H = Expr::parse("-2*t*ln(1+p1^2)", 1);
        s.sigma = quadratic_sigma();
        s.sigma_star = Expr::parse("q1^2/2", 1);
        s.q_box = Box::cube(1, param("q_lo", -10), param("q_hi", 10));
        s.a2 = {A2Kind::Separable,
                SeparableParts{Expr::parse("-2*t", 1), Expr::parse("ln(1+p1^2)", 1), Expr::parse("0", 1)}};
        entry.sample_box = Box::cube(1, -3, 3);
        entry.description = "u_t - 2t ln(1+u_x^2) = 0, u(0,x) = x^2/2";
    } else if (name == "transport") {
        s.T = param("T", 2.0);
        s.H = Expr::parse("p1", 1);
        s.sigma = quadratic_sigma();
        s.sigma_star = Expr::parse("q1^2/2", 1);
        s.q_box = Box::cube(1, param("q_lo", -10), param("q_hi", 10));
        s.a2 = {A2Kind::ConvexInP, std::nullopt};
        entry.sample_box = Box::cube(1, -3, 3);
        entry.description = "u_t + u_x = 0, u(0,x) = x^2/2";
    } else if (name == "zero") {
        s.T = param("T", 2.0);
        s.H = Expr::parse("0", 1);
        s.sigma = quadratic_sigma();
        s.sigma_star = Expr::parse("q1^2/2", 1);
        s.q_box = Box::cube(1, param("q_lo", -10), param("q_hi", 10));
        s.a2 = {A2Kind::ConvexInP, std::nullopt};
        entry.sample_box = Box::cube(1, -3, 3);
        entry.description = "u_t = 0, u(0,x) = x^2/2";
    } else if (name == "anti-burgers") {
        s.T = param("T", 0.9);
        s.H = Expr::parse("-p1^2/2", 1);
        s.sigma = quadratic_sigma();
        s.sigma_star = Expr::parse("q1^2/2", 1);
        s.q_box = Box::cube(1, param("q_lo", -10), param("q_hi", 10));
        s.a2 = {A2Kind::StrictlyConcaveInP, std::nullopt};
        entry.sample_box = Box::cube(1, -0.5, 0.5);
        entry.description = "u_t - u_x^2/2 = 0, u(0,x) = x^2/2";
    } else if (name == "lipschitz-sigma") {
        s.T = param("T", 1.0);
        s.H = Expr::parse("p1^2/2", 1);
        s.sigma = std::make_shared<const ConvexData>(Expr::parse("sqrt(1+x1^2)", 1), Box::cube(1, -20, 20),
                                                     Expr::parse("-sqrt(1-q1^2)", 1), 1.0);
        s.sigma_star = Expr::parse("-sqrt(1-q1^2)", 1);
        s.q_box = Box::cube(1, param("q_lo", -1), param("q_hi", 1));
        s.a2 = {A2Kind::ConvexInP, std::nullopt};
        entry.sample_box = Box::cube(1, -3, 3);
        entry.description = "u_t + u_x^2/2 = 0, u(0,x) = sqrt(1+x^2)";
    } else {
        throw ConfigError("unknown catalog problem '" + name + "'");
    }
    entry.problem = std::make_shared<const HJProblem>(std::move(s));
    return entry;
}

}  // namespace hjhopf
