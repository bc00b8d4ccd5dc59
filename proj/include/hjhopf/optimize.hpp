#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hjhopf/vec.hpp"

namespace hjhopf::opt {

/// Scalar objective to be maximized. `value` may return -inf outside its domain;
/// `gradient` is optional and may throw where the objective is not differentiable.
struct Objective {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
};

struct Candidate {
    Vec point;
    double value = 0.0;
};

struct MultistartOptions {
    int grid_per_axis = 64;
    int top_seeds = 16;
    /// Subgrid resolution used inside each seed bracket (n = 1) to separate
    /// maxima closer than one seed-grid cell.
    int subgrid = 32;
    double x_tol = 1e-12;
};

/// Uniform seed grid, discrete hill climb from the best seeds, then local ascent:
/// golden-section plus a derivative bisection polish in 1-D, projected BFGS otherwise.
/// Returns every refined local maximum found (unclustered; duplicates possible).
std::vector<Candidate> multistart_maximize(const Objective& f, const Box& box,
                                           const MultistartOptions& options);

/// Golden-section search for a maximum of f on [a, c] given an interior b with
/// f(b) >= max(f(a), f(c)). Converges to a local maximum.
Candidate golden_maximize(const std::function<double(double)>& f, double a, double b, double c,
                          double tol, int max_iter = 300);

/// Bisection on the sign of a derivative around `x`: finds a stationary point of a
/// local maximum inside [lo, hi]. Returns nullopt if no bracket with df(lo) > 0 > df(hi)
/// exists within `max_radius` of x.
std::optional<double> polish_stationary(const std::function<double(double)>& df, double x,
                                        double lo, double hi, double start_radius,
                                        double max_radius, double tol);

struct Cluster {
    Vec point;      // best-valued member
    double value = 0.0;
    int members = 0;
};

/// Greedy clustering by value: each candidate joins the first cluster whose
/// representative is within `radius`, else opens a new one. Sorted by value, best first.
std::vector<Cluster> cluster(std::vector<Candidate> candidates, double radius);

}  // namespace hjhopf::opt
