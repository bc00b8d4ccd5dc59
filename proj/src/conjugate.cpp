#include "hjhopf/conjugate.hpp"

#include <cmath>
#include <random>

#include "hjhopf/optimize.hpp"

namespace hjhopf {
namespace {

constexpr double kEscapeIncrease = 1e-6;

int conjugate_grid(int n) { return n == 3 ? 24 : 64; }

double closed_form_value(const expr::Expr& e, const Vec& q) {
    expr::Bindings b(q.size());
    b.p = q;
    try {
        return e.eval(b);
    } catch (const DomainError&) {
        return kPlusInf;
    }
}

ConjugatePoint maximize_on(const ConvexData& c, const Vec& q, const Box& box) {
    opt::Objective obj;
    obj.value = [&](const Vec& x) { return dot(x, q) - c.sigma_value(x); };
    obj.gradient = [&](const Vec& x) { return q - c.sigma_gradient(x); };
    opt::MultistartOptions options;
    options.grid_per_axis = conjugate_grid(c.dim());
    const auto cands = opt::multistart_maximize(obj, box, options);
    if (cands.empty()) throw DomainError("sigma is undefined on the whole search box");
    const opt::Candidate* best = &cands.front();
    for (const auto& cand : cands)
        if (cand.value > best->value) best = &cand;
    ConjugatePoint out;
    out.value = best->value;
    out.argmax = best->point;
    out.boundary = box.distance_to_boundary(best->point) <= 1e-9 * box.diameter();
    return out;
}

}  // namespace

ConvexData::ConvexData(expr::Expr sigma, Box x_box, std::optional<expr::Expr> closed_form,
                       std::optional<double> lipschitz_hint)
    : sigma_(std::move(sigma)),
      x_box_(std::move(x_box)),
      closed_form_(std::move(closed_form)),
      lipschitz_hint_(lipschitz_hint),
      memo_(std::make_shared<MemoTable<ConjugatePoint>>()) {
    if (sigma_.empty()) throw ConfigError("sigma expression is empty");
    if (x_box_.dim() != sigma_.dim()) throw ConfigError("sigma search box dimension mismatch");
    if (closed_form_ && closed_form_->dim() != sigma_.dim())
        throw ConfigError("closed-form conjugate dimension mismatch");
    if (sigma_.depends_on(expr::VarKind::Time) || sigma_.depends_on(expr::VarKind::Momentum))
        throw ConfigError("sigma may depend on x only");
    if (lipschitz_hint_ && !(*lipschitz_hint_ > 0)) throw ConfigError("lipschitz hint must be positive");

    std::mt19937_64 rng(0x5eed'c0de);
    const int n = dim();
    const auto draw = [&] {
        Vec p(n);
        for (int i = 0; i < n; ++i)
            p[i] = std::uniform_real_distribution<double>(x_box_.lo[i], x_box_.hi[i])(rng);
        return p;
    };
    for (int k = 0; k < 1000; ++k) {
        const Vec a = draw(), b = draw();
        const double fa = sigma_value(a), fb = sigma_value(b);
        const double fm = sigma_value(0.5 * (a + b));
        const double avg = 0.5 * (fa + fb);
        if (fm > avg + 1e-9 + 1e-12 * std::abs(avg))
            throw ConfigError("sigma fails the sampled midpoint-convexity check");
    }
}

double ConvexData::sigma_value(const Vec& x) const {
    expr::Bindings b(dim());
    b.x = x;
    return sigma_.eval(b);
}

Vec ConvexData::sigma_gradient(const Vec& x) const {
    expr::Bindings b(dim());
    b.x = x;
    return sigma_.gradient(expr::VarKind::Space, b);
}

ConjugatePoint conjugate_numeric(const ConvexData& c, const Vec& q) {
    if (q.size() != c.dim()) throw ConfigError("conjugate argument has the wrong dimension");
    for (double v : q)
        if (!std::isfinite(v)) throw DomainError("conjugate argument must be finite");
    return c.memo().get_or_compute(0, q, 0.0, [&] {
        ConjugatePoint base = maximize_on(c, q, c.x_box());
        if (!base.boundary) return base;
        ConjugatePoint wide = maximize_on(c, q, c.x_box().scaled(2.0));
        if (wide.value - base.value > kEscapeIncrease) {
            wide.value = kPlusInf;
            wide.boundary = true;
        }
        return wide;
    });
}

double conjugate_value(const ConvexData& c, const Vec& q) {
    if (c.closed_form()) return closed_form_value(*c.closed_form(), q);
    return conjugate_numeric(c, q).value;
}

Vec conjugate_gradient(const ConvexData& c, const Vec& q) {
    if (c.closed_form()) {
        expr::Bindings b(q.size());
        b.p = q;
        return c.closed_form()->gradient(expr::VarKind::Momentum, b);
    }
    const ConjugatePoint cp = conjugate_numeric(c, q);
    if (!std::isfinite(cp.value)) throw DomainError("gradient requested outside dom sigma*");
    return cp.argmax;
}

namespace {

struct SideEstimate {
    double value = 0.0;
    bool diverges_up = false;
    bool diverges_down = false;
};

// One-sided difference quotients of f at p0 along `sign`, Richardson-extrapolated.
SideEstimate one_side(const std::function<double(double)>& f, double p0, double f0, double sign,
                      double radius) {
    std::vector<double> quotients;
    for (int j = 0; j <= 8; ++j) {
        const double h = radius * std::ldexp(1.0, -j);
        const double v = f(p0 + sign * h);
        if (!std::isfinite(v)) {
            quotients.clear();  // keep only the tail of finite probes
            continue;
        }
        quotients.push_back((v - f0) / (sign * h));
    }
    SideEstimate out;
    if (quotients.empty()) {
        // Every probe left dom sigma*: slope is infinite in the probing direction.
        out.value = sign * kPlusInf;
        (sign > 0 ? out.diverges_up : out.diverges_down) = true;
        return out;
    }
    const std::size_t m = quotients.size();
    if (m >= 4) {
        const double e1 = quotients[m - 1] - quotients[m - 2];
        const double e2 = quotients[m - 2] - quotients[m - 3];
        const double e3 = quotients[m - 3] - quotients[m - 4];
        const bool growing = std::abs(e1) > 0.9 * std::abs(e2) && std::abs(e2) > 0.9 * std::abs(e3) &&
                             std::abs(e1) > 1e-8 * (1 + std::abs(quotients[m - 1]));
        const bool same_sign = (e1 > 0) == (e2 > 0) && (e2 > 0) == (e3 > 0);
        if (growing && same_sign) {
            out.value = e1 > 0 ? kPlusInf : -kPlusInf;
            (e1 > 0 ? out.diverges_up : out.diverges_down) = true;
            return out;
        }
    }
    out.value = m >= 2 ? 2 * quotients[m - 1] - quotients[m - 2] : quotients[m - 1];
    return out;
}

}  // namespace

Subdifferential subdifferential(const ConvexData& c, const Vec& p0, double probe_radius) {
    if (!(probe_radius > 0)) throw PreconditionError("probe radius must be positive");
    const double f0 = conjugate_value(c, p0);
    if (!std::isfinite(f0)) throw PreconditionError("p0 lies outside dom sigma*");
    Subdifferential out;
    const int n = c.dim();
    if (n == 1) {
        const auto f = [&](double q) { return conjugate_value(c, Vec{q}); };
        const SideEstimate left = one_side(f, p0[0], f0, -1.0, probe_radius);
        const SideEstimate right = one_side(f, p0[0], f0, +1.0, probe_radius);
        out.lower = left.value;
        out.upper = right.value;
        out.unbounded_above = left.diverges_up || right.diverges_up;
        out.unbounded_below = left.diverges_down || right.diverges_down;
        return out;
    }

    const auto grad_at = [&](double h) {
        Vec g(n);
        for (int i = 0; i < n; ++i) {
            Vec a = p0, b = p0;
            a[i] -= h;
            b[i] += h;
            g[i] = (conjugate_value(c, b) - conjugate_value(c, a)) / (2 * h);
        }
        return g;
    };
    std::vector<Vec> grads;
    for (int j = 0; j <= 8; ++j) grads.push_back(grad_at(probe_radius * std::ldexp(1.0, -j)));
    const Vec& g8 = grads[8];
    const Vec& g7 = grads[7];
    bool finite = true;
    for (double v : g8) finite = finite && std::isfinite(v);
    if (finite && distance(g8, g7) <= 1e-6 * (1 + norm(g8))) {
        out.slopes.push_back((4.0 / 3.0) * g8 - (1.0 / 3.0) * g7);
        return out;
    }
    // Sampled supporting slopes: one-sided quotients for every orthant direction.
    out.sampled = true;
    const double h = probe_radius * std::ldexp(1.0, -8);
    for (int mask = 0; mask < (1 << n); ++mask) {
        Vec g(n);
        bool ok = true;
        for (int i = 0; i < n; ++i) {
            const double s = (mask >> i) & 1 ? 1.0 : -1.0;
            Vec b = p0;
            b[i] += s * h;
            const double v = conjugate_value(c, b);
            ok = ok && std::isfinite(v);
            g[i] = (v - f0) / (s * h);
        }
        if (ok) out.slopes.push_back(g);
    }
    return out;
}

bool check_affine_segment(const std::function<double(const Vec&)>& v, const Vec& p, const Vec& p0,
                          const Vec& y) {
    const int n = p0.size();
    if (p.size() != n || y.size() != n) throw ConfigError("affine segment arguments differ in dimension");
    const double v0 = v(p0);
    const double vp = v(p);
    if (!std::isfinite(v0) || !std::isfinite(vp)) throw PreconditionError("v must be finite at p and p0");

    std::mt19937_64 rng(0xaff1'4e);
    const double reach = 2.0 * std::max(1.0, distance(p, p0));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        Vec z = p0;
        for (int i = 0; i < n; ++i) z[i] += reach * unit(rng);
        double vz;
        try {
            vz = v(z);
        } catch (const DomainError&) {
            continue;
        }
        if (vz < v0 + dot(y, z - p0) - 1e-8)
            throw PreconditionError("y is not a subgradient of v at p0");
    }

    if (std::abs(dot(y, p - p0) - (vp - v0)) > 1e-8) return false;
    for (int k = 0; k < 50; ++k) {
        const double s = k / 49.0;
        const Vec z = p0 + s * (p - p0);
        const double expected = dot(y, z) - dot(y, p0) + v0;
        if (std::abs(v(z) - expected) > 1e-6)
            throw NumericError("v departs from its supporting line on [p, p0]; v is not convex");
    }
    return true;
}

}  // namespace hjhopf
