#include "hjhopf/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>

namespace hjhopf::opt {
namespace {

constexpr double kGoldenFraction = 0.3819660112501051;  // 2 - phi
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_value(const Objective& f, const Vec& x) {
    try {
        const double v = f.value(x);
        return std::isnan(v) ? kNegInf : v;
    } catch (const DomainError&) {
        return kNegInf;
    }
}

// Plain golden-section over [a, c] that also keeps the best endpoint; used where no
// interior bracketing point is known (maxima pressed against the box).
Candidate golden_plain(const std::function<double(double)>& f, double a, double c, double tol) {
    double x1 = a + kGoldenFraction * (c - a);
    double x2 = c - kGoldenFraction * (c - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 300 && c - a > tol * (1 + std::abs(a)); ++it) {
        if (f1 >= f2) {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + kGoldenFraction * (c - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = c - kGoldenFraction * (c - a);
            f2 = f(x2);
        }
    }
    Candidate best{Vec{x1}, f1};
    if (f2 > best.value) best = {Vec{x2}, f2};
    for (double e : {a, c})
        if (const double fe = f(e); fe > best.value) best = {Vec{e}, fe};
    return best;
}

std::vector<Candidate> maximize_1d(const Objective& f, const Box& box, const MultistartOptions& opt) {
    const int n_grid = std::max(opt.grid_per_axis, 3);
    const double lo = box.lo[0], hi = box.hi[0];
    const std::vector<double> grid = linspace(lo, hi, n_grid);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = safe_value(f, Vec{grid[i]});

    const auto scalar = [&](double q) { return safe_value(f, Vec{q}); };
    const auto last = static_cast<int>(grid.size()) - 1;
    const auto is_local_max = [&](int i) {
        if (!std::isfinite(vals[i])) return false;
        return (i == 0 || vals[i] >= vals[i - 1]) && (i == last || vals[i] >= vals[i + 1]);
    };

    std::vector<int> order;
    for (int i = 0; i <= last; ++i)
        if (std::isfinite(vals[i])) order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const bool la = is_local_max(a), lb = is_local_max(b);
        if (la != lb) return la;
        return vals[a] > vals[b];
    });
    if (static_cast<int>(order.size()) > opt.top_seeds) order.resize(static_cast<std::size_t>(opt.top_seeds));

    std::set<int> peaks;
    for (int m : order) {
        for (;;) {
            int next = m;
            if (m > 0 && vals[m - 1] > vals[next]) next = m - 1;
            if (m < last && vals[m + 1] > vals[next]) next = m + 1;
            if (next == m) break;
            m = next;
        }
        peaks.insert(m);
    }

    std::function<double(double)> deriv;
    if (f.gradient) deriv = [&](double q) { return f.gradient(Vec{q})[0]; };

    std::vector<Candidate> out;
    const int n_sub = std::max(opt.subgrid, 3) | 1;  // odd, so the peak is a subgrid node
    for (int m : peaks) {
        const double a = grid[std::max(m - 1, 0)];
        const double c = grid[std::min(m + 1, last)];
        const std::vector<double> sub = linspace(a, c, n_sub);
        std::vector<double> sv(sub.size());
        for (std::size_t j = 0; j < sub.size(); ++j) sv[j] = scalar(sub[j]);
        const int s_last = n_sub - 1;
        const double spacing = (c - a) / (n_sub - 1);
        for (int j = 0; j <= s_last; ++j) {
            if (!std::isfinite(sv[j])) continue;
            const bool left_ok = j == 0 || sv[j] >= sv[j - 1];
            const bool right_ok = j == s_last || sv[j] >= sv[j + 1];
            if (!left_ok || !right_ok) continue;
            // Plateaus: keep only the first node of a run of equal values.
            if (j > 0 && sv[j] == sv[j - 1]) continue;
            Candidate cand;
            if (j > 0 && j < s_last) {
                cand = golden_maximize(scalar, sub[j - 1], sub[j], sub[j + 1], opt.x_tol);
            } else if ((j == 0 && sub[0] == lo) || (j == s_last && sub[j] == hi)) {
                const double inner = j == 0 ? sub[1] : sub[s_last - 1];
                cand = golden_plain(scalar, std::min(sub[j], inner), std::max(sub[j], inner), opt.x_tol);
            } else {
                continue;
            }
            if (deriv) {
                const double x = cand.point[0];
                const auto r = polish_stationary(deriv, x, lo, hi, std::max(1e-9 * (1 + std::abs(x)), 1e-3 * spacing),
                                                 spacing, 1e-15);
                if (r) {
                    const double fr = scalar(*r);
                    if (fr >= cand.value - 1e-12 * (1 + std::abs(cand.value))) cand = {Vec{*r}, fr};
                }
            }
            out.push_back(cand);
        }
    }
    return out;
}

using Mat = std::array<std::array<double, kMaxDim>, kMaxDim>;

Vec fd_gradient(const Objective& f, const Vec& x, const Box& box) {
    Vec g(x.size());
    for (int i = 0; i < x.size(); ++i) {
        const double h = 1e-7 * (1 + std::abs(x[i]));
        Vec a = x, b = x;
        a[i] = std::max(box.lo[i], x[i] - h);
        b[i] = std::min(box.hi[i], x[i] + h);
        g[i] = (safe_value(f, b) - safe_value(f, a)) / (b[i] - a[i]);
    }
    return g;
}

Candidate projected_bfgs(const Objective& f, const Box& box, Vec x, double tol) {
    const int n = x.size();
    const auto grad = [&](const Vec& p) {
        if (f.gradient) {
            try {
                return f.gradient(p);
            } catch (const DomainError&) {
            }
        }
        return fd_gradient(f, p, box);
    };
    double fx = safe_value(f, x);
    Vec g = grad(x);
    Mat hinv{};
    for (int i = 0; i < n; ++i) hinv[i][i] = 1.0;

    for (int it = 0; it < 200; ++it) {
        Vec d(n);
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += hinv[i][j] * g[j];
            d[i] = s;
        }
        for (int i = 0; i < n; ++i) {
            if ((x[i] <= box.lo[i] && d[i] < 0) || (x[i] >= box.hi[i] && d[i] > 0)) d[i] = 0.0;
        }
        if (dot(d, g) <= 0) {
            d = g;  // reset to steepest ascent
            for (int i = 0; i < n; ++i) {
                if ((x[i] <= box.lo[i] && d[i] < 0) || (x[i] >= box.hi[i] && d[i] > 0)) d[i] = 0.0;
                for (int j = 0; j < n; ++j) hinv[i][j] = i == j ? 1.0 : 0.0;
            }
        }
        if (norm(d) == 0) break;

        double alpha = 1.0;
        Vec xn = x;
        double fn = kNegInf;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
            xn = box.clamp(x + alpha * d);
            fn = safe_value(f, xn);
            if (fn >= fx + 1e-4 * dot(g, xn - x)) {
                moved = true;
                break;
            }
        }
        if (!moved) break;
        const Vec s = xn - x;
        const Vec gn = grad(xn);
        // Gradient change of -f along s.
        const Vec y = -1.0 * (gn - g);
        x = xn;
        const double fprev = fx;
        fx = fn;
        g = gn;
        if (norm(s) <= tol * (1 + norm(x)) || std::abs(fx - fprev) <= 1e-16 * (1 + std::abs(fx))) break;
        // BFGS inverse-Hessian update for -f.
        const Vec yb = y;
        const double rho_den = dot(yb, s);
        if (rho_den > 1e-300) {
            const double rho = 1.0 / rho_den;
            Mat a{}, hnew{};
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) a[i][j] = (i == j ? 1.0 : 0.0) - rho * s[i] * yb[j];
            Mat tmp{};
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double acc = 0.0;
                    for (int k = 0; k < n; ++k) acc += a[i][k] * hinv[k][j];
                    tmp[i][j] = acc;
                }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double acc = 0.0;
                    for (int k = 0; k < n; ++k) acc += tmp[i][k] * a[j][k];
                    hnew[i][j] = acc + rho * s[i] * s[j];
                }
            hinv = hnew;
        }
    }
    return {x, fx};
}

std::vector<Candidate> maximize_nd(const Objective& f, const Box& box, const MultistartOptions& opt) {
    const int n = box.dim();
    const int per_axis = std::max(opt.grid_per_axis, 2);
    const std::vector<Vec> grid = tensor_grid(box, per_axis);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = safe_value(f, grid[i]);

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (std::isfinite(vals[i])) order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return vals[a] > vals[b]; });
    if (order.size() > static_cast<std::size_t>(opt.top_seeds)) order.resize(static_cast<std::size_t>(opt.top_seeds));

    std::vector<std::size_t> strides(static_cast<std::size_t>(n));
    std::size_t stride = 1;
    for (int i = 0; i < n; ++i) {
        strides[static_cast<std::size_t>(i)] = stride;
        stride *= static_cast<std::size_t>(per_axis);
    }
    std::set<std::size_t> peaks;
    for (std::size_t m : order) {
        for (;;) {
            std::size_t next = m;
            for (int i = 0; i < n; ++i) {
                const std::size_t s = strides[static_cast<std::size_t>(i)];
                const std::size_t coord = (m / s) % static_cast<std::size_t>(per_axis);
                if (coord > 0 && vals[m - s] > vals[next]) next = m - s;
                if (coord + 1 < static_cast<std::size_t>(per_axis) && vals[m + s] > vals[next]) next = m + s;
            }
            if (next == m) break;
            m = next;
        }
        peaks.insert(m);
    }
    std::vector<Candidate> out;
    for (std::size_t m : peaks) out.push_back(projected_bfgs(f, box, grid[m], opt.x_tol));
    return out;
}

}  // namespace

Candidate golden_maximize(const std::function<double(double)>& f, double a, double b, double c,
                          double tol, int max_iter) {
    double fb = f(b);
    for (int it = 0; it < max_iter && c - a > tol * (1 + std::abs(b)); ++it) {
        if (b - a > c - b) {
            const double x = b - kGoldenFraction * (b - a);
            const double fx = f(x);
            if (fx > fb) {
                c = b;
                b = x;
                fb = fx;
            } else {
                a = x;
            }
        } else {
            const double x = b + kGoldenFraction * (c - b);
            const double fx = f(x);
            if (fx > fb) {
                a = b;
                b = x;
                fb = fx;
            } else {
                c = x;
            }
        }
    }
    return {Vec{b}, fb};
}

std::optional<double> polish_stationary(const std::function<double(double)>& df, double x,
                                        double lo, double hi, double start_radius,
                                        double max_radius, double tol) {
    try {
        for (double r = start_radius; r <= max_radius * (1 + 1e-12); r *= 4) {
            double a = std::max(lo, x - r);
            double b = std::min(hi, x + r);
            double ga = df(a);
            double gb = df(b);
            if (ga == 0) return a;
            if (gb == 0) return b;
            if (!(ga > 0 && gb < 0)) continue;
            for (int it = 0; it < 200 && b - a > tol * (1 + std::abs(x)); ++it) {
                const double m = 0.5 * (a + b);
                if (m <= a || m >= b) break;
                const double gm = df(m);
                if (gm > 0) a = m;
                else if (gm < 0) b = m;
                else return m;
            }
            return 0.5 * (a + b);
        }
    } catch (const DomainError&) {
    }
    return std::nullopt;
}

std::vector<Candidate> multistart_maximize(const Objective& f, const Box& box,
                                           const MultistartOptions& options) {
    return box.dim() == 1 ? maximize_1d(f, box, options) : maximize_nd(f, box, options);
}

std::vector<Cluster> cluster(std::vector<Candidate> candidates, double radius) {
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
    std::vector<Cluster> out;
    for (const Candidate& c : candidates) {
        if (!std::isfinite(c.value)) continue;
        bool joined = false;
        for (Cluster& k : out) {
            if (distance(k.point, c.point) <= radius) {
                ++k.members;
                joined = true;
                break;
            }
        }
        if (!joined) out.push_back({c.point, c.value, 1});
    }
    return out;
}

}  // namespace hjhopf::opt
