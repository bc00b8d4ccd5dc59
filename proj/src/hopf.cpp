#include "hjhopf/hopf.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hjhopf/optimize.hpp"
#include "hjhopf/quadrature.hpp"

namespace hjhopf {
namespace {

void check_time(const HJProblem& prob, double t) {
    if (!(t >= 0 && t <= prob.horizon())) throw PreconditionError("time outside [0, T]");
}

void check_point(const HJProblem& prob, const Vec& x) {
    if (x.size() != prob.dim()) throw ConfigError("point has the wrong dimension");
}

bool lex_less(const Vec& a, const Vec& b) { return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()); }

MaximizerSet build_set(const HJProblem& prob, std::vector<opt::Candidate> candidates) {
    const auto clusters = opt::cluster(std::move(candidates), prob.cluster_radius());
    if (clusters.empty()) throw NumericError("phi is -inf on the whole q-box (empty effective domain)");
    MaximizerSet out;
    out.value = clusters.front().value;
    out.cluster_radius = prob.cluster_radius();
    out.value_tolerance = 1e-9 * (1 + std::abs(out.value));
    out.cluster_count = static_cast<int>(clusters.size());
    std::vector<std::pair<Vec, double>> members;
    for (const auto& c : clusters) {
        if (c.value >= out.value - out.value_tolerance) {
            members.emplace_back(c.point, c.value);
        } else if (!out.runner_up) {
            out.runner_up = c.value;
        }
    }
    std::sort(members.begin(), members.end(), [](const auto& a, const auto& b) { return lex_less(a.first, b.first); });
    for (const auto& [p, v] : members) {
        out.points.push_back(p);
        out.values.push_back(v);
        if (prob.q_box().distance_to_boundary(p) <= out.cluster_radius) out.boundary_contact = true;
    }
    return out;
}

}  // namespace

double MaximizerSet::distance_to(const Vec& q) const {
    double d = INFINITY;
    for (const Vec& p : points) d = std::min(d, distance(p, q));
    return d;
}

double cumulative_H(const HJProblem& prob, const Vec& q, double t) {
    check_time(prob, t);
    return prob.quadrature_memo().get_or_compute(0, q, t, [&] {
        return adaptive_simpson<double>([&](double tau) { return prob.H(tau, q); }, 0.0, t);
    });
}

Vec cumulative_H_p(const HJProblem& prob, const Vec& q, double t) {
    check_time(prob, t);
    return prob.vector_memo().get_or_compute(0, q, t, [&] {
        return adaptive_simpson<Vec>([&](double tau) { return prob.H_p(tau, q); }, 0.0, t);
    });
}

double phi(const HJProblem& prob, double t, const Vec& x, const Vec& q) {
    const double s = prob.sigma_star(q);
    if (!std::isfinite(s)) return kMinusInf;
    return dot(x, q) - s - cumulative_H(prob, q, t);
}

Vec phi_gradient(const HJProblem& prob, double t, const Vec& x, const Vec& q) {
    return x - prob.sigma_star_gradient(q) - cumulative_H_p(prob, q, t);
}

int evaluate_grid(int n) { return n == 1 ? 64 : (n == 2 ? 32 : 12); }

MaximizerSet evaluate(const HJProblem& prob, double t, const Vec& x) {
    check_time(prob, t);
    check_point(prob, x);
    opt::Objective obj;
    obj.value = [&](const Vec& q) { return phi(prob, t, x, q); };
    obj.gradient = [&](const Vec& q) { return phi_gradient(prob, t, x, q); };
    opt::MultistartOptions options;
    options.grid_per_axis = evaluate_grid(prob.dim());
    options.top_seeds = 16;
    options.x_tol = 1e-12;
    return build_set(prob, opt::multistart_maximize(obj, prob.q_box(), options));
}

MaximizerSet argmax_brute(const HJProblem& prob, double t, const Vec& x, int grid_per_axis) {
    check_time(prob, t);
    check_point(prob, x);
    if (grid_per_axis < 2) throw PreconditionError("brute-force grid needs at least 2 nodes per axis");
    const Box& box = prob.q_box();
    const int n = prob.dim();
    const auto f = [&](const Vec& q) { return phi(prob, t, x, q); };

    const std::vector<Vec> grid = tensor_grid(box, grid_per_axis);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = f(grid[i]);

    // Discrete local maxima in the axis-neighbour sense.
    std::vector<std::size_t> strides(static_cast<std::size_t>(n));
    std::size_t stride = 1;
    for (int i = 0; i < n; ++i) {
        strides[static_cast<std::size_t>(i)] = stride;
        stride *= static_cast<std::size_t>(grid_per_axis);
    }
    std::vector<std::size_t> peaks;
    for (std::size_t m = 0; m < grid.size(); ++m) {
        if (!std::isfinite(vals[m])) continue;
        bool peak = true;
        for (int i = 0; i < n && peak; ++i) {
            const std::size_t s = strides[static_cast<std::size_t>(i)];
            const std::size_t coord = (m / s) % static_cast<std::size_t>(grid_per_axis);
            if (coord > 0 && vals[m - s] > vals[m]) peak = false;
            if (coord + 1 < static_cast<std::size_t>(grid_per_axis) && vals[m + s] > vals[m]) peak = false;
        }
        if (peak) peaks.push_back(m);
    }
    std::stable_sort(peaks.begin(), peaks.end(), [&](auto a, auto b) { return vals[a] > vals[b]; });
    if (peaks.size() > 8) peaks.resize(8);

    const int zoom_nodes = n == 1 ? 65 : (n == 2 ? 17 : 9);
    std::vector<opt::Candidate> candidates;
    for (std::size_t m : peaks) {
        Vec center = grid[m];
        double best = vals[m];
        Vec half(n);
        for (int i = 0; i < n; ++i) half[i] = (box.hi[i] - box.lo[i]) / (grid_per_axis - 1);
        for (int level = 0; level < 24 && norm(half) > 1e-10 * box.diameter(); ++level) {
            const Box sub(box.clamp(center - half), box.clamp(center + half));
            for (const Vec& q : tensor_grid(sub, zoom_nodes)) {
                const double v = f(q);
                if (v > best) {
                    best = v;
                    center = q;
                }
            }
            for (int i = 0; i < n; ++i) half[i] = (sub.hi[i] - sub.lo[i]) / (zoom_nodes - 1);
        }
        candidates.push_back({center, best});
    }
    return build_set(prob, std::move(candidates));
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

A1Report check_A1(const HJProblem& prob, double t0, const Vec& x0, double r, int samples, std::uint64_t seed) {
    if (!(r > 0)) throw PreconditionError("radius must be positive");
    if (samples < 1) throw PreconditionError("need at least one sample");
    check_point(prob, x0);
    const int n = prob.dim();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    A1Report report;
    report.min_boundary_distance = INFINITY;
    const double margin = 0.01 * prob.q_box().diameter();
    int drawn = 0;
    for (int attempts = 0; drawn < samples && attempts < 1000 * samples; ++attempts) {
        const double t = t0 + r * unit(rng);
        Vec x = x0;
        for (int i = 0; i < n; ++i) x[i] += r * unit(rng);
        if (std::abs(t - t0) + distance(x, x0) >= r) continue;
        if (t < 0 || t >= prob.horizon()) continue;
        ++drawn;
        const MaximizerSet ms = evaluate(prob, t, x);
        for (const Vec& p : ms.points)
            report.min_boundary_distance = std::min(report.min_boundary_distance, prob.q_box().distance_to_boundary(p));
        if (ms.boundary_contact) {
            report.verdict = Verdict::Fail;
            report.witness = std::make_pair(t, x);
            report.samples = drawn;
            return report;
        }
    }
    report.samples = drawn;
    if (drawn == 0) throw PreconditionError("no admissible sample points in the ball");
    report.verdict = report.min_boundary_distance > margin ? Verdict::Pass : Verdict::Inconclusive;
    return report;
}

}  // namespace hjhopf
