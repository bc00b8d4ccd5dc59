#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hjhopf/characteristics.hpp"

namespace hjhopf {

enum class PointVerdict { Regular, Singular, Borderline };
std::string to_string(PointVerdict v);

/// A candidate gradient (u_t, u_x) = (p, q).
struct GradientPair {
    double p = 0.0;
    Vec q;
};

struct PointReport {
    double t = 0.0;
    Vec x;
    PointVerdict verdict = PointVerdict::Singular;
    double u = 0.0;
    std::optional<GradientPair> gradient;  // set when Regular
    std::vector<GradientPair> reachable;   // (-H(t,q), q) for q in ell
    MaximizerSet ell;
};

/// Regular iff ell(t,x) is a single cluster; Borderline when the runner-up cluster lies
/// within 10x value_tolerance of the maximum. Requires 0 < t < T.
PointReport classify_point(const HJProblem& prob, double t, const Vec& x);
/// Same verdict rule applied to an already computed ell; no range check on t.
PointReport classify_from(const HJProblem& prob, double t, const Vec& x, MaximizerSet ell);

/// {(-H(t0,q), q) : q in ell(t0,x0)}.
std::vector<GradientPair> reachable_gradients(const HJProblem& prob, double t0, const Vec& x0);

enum class Side { Super, Sub };
enum class Membership { Member, NonMember, Inconclusive };
std::string to_string(Side s);
std::string to_string(Membership m);

struct MembershipResult {
    Membership verdict = Membership::Inconclusive;
    double estimate = 0.0;                // last extrapolated limsup / liminf
    std::vector<double> radii;            // 2^-j, j = 3..12
    std::vector<double> extremes;         // max (super) or min (sub) of the quotient per radius
    std::vector<double> extrapolated;     // 2 M_j - M_{j-1}
    int directions = 0;
};

/// Sampled test of (p,q) in D+u (Side::Super) or D-u (Side::Sub) at (t0,x0), using 32
/// seeded unit directions in R^{n+1}. Requires 0 < t0 < T.
MembershipResult membership_halfdiff(const HJProblem& prob, double t0, const Vec& x0, double p, const Vec& q,
                                     Side side, std::uint64_t seed = 7);

struct InjectivityResult {
    bool injective = true;
    std::optional<std::pair<Vec, Vec>> witness;  // two initial points with (nearly) equal x(t,.)
    int grid = 0;
    bool best_effort = false;                    // n >= 2
};

/// n = 1: strict monotonicity of y -> x(t,y) on a grid. n >= 2: pairwise collisions
/// closer than 1e-8 diam on a tensor grid.
InjectivityResult injectivity_test(const HJProblem& prob, double t, const Box& y_box, int grid);

struct StripLevel {
    double t = 0.0;
    bool singleton_ok = true;
    bool injective_ok = true;
    bool all_type1_ok = true;
};

struct StripReport {
    double t_star = 0.0;
    std::vector<StripLevel> levels;  // ascending t
    int t_levels = 0;
    int x_grid = 0;
    int curve_nodes = 0;   // y-grid used for injectivity and ell*
    int refinements = 0;   // crossing evaluations added between x-grid neighbours
};

/// Scans t_k = k T / (t_levels + 1), k = 1..t_levels. t_star is the first level that
/// fails singleton_ok (T when none does). Grid-relative claim.
StripReport strip_scan(const HJProblem& prob, const Box& x_box, int t_levels, int x_grid);

enum class TraceEnd { ReachedEnd, Gap };
std::string to_string(TraceEnd e);

struct TraceStep {
    double t = 0.0;
    Vec x;
    MaximizerSet ell;
};

struct SingularTrace {
    double t0 = 0.0;
    Vec x0;
    std::vector<TraceStep> steps;  // steps[0] is the seed
    double epsilon = 0.0;
    double delta = 0.0;
    double t_end = 0.0;
    TraceEnd terminated = TraceEnd::ReachedEnd;
    int ball_grid = 0;
    std::optional<double> gap_time;  // first time with no singular point found
};

/// Follows singular points forward: steps of delta = min(eps / sup|H_p|, (t_end - t0)/8),
/// each searching the closed ball of radius eps around the previous point.
SingularTrace trace_singularities(const HJProblem& prob, double t0, const Vec& x0, double eps, double t_end);

/// |u_t + H(t, u_x)| from central differences of u at step h (default 1e-5 (1+|x|)).
/// The point must be Regular and the stencil must stay inside [0, T].
double pde_residual(const HJProblem& prob, double t, const Vec& x, std::optional<double> h = std::nullopt);

/// Central-difference gradient of u; empty when some stencil point is not Regular or its
/// maximizer differs from the centre's by more than 1e-4 (stencil straddles a kink).
std::optional<GradientPair> fd_gradient(const HJProblem& prob, double t, const Vec& x, double h);

struct ApproachReport {
    std::vector<GradientPair> targets;       // reachable gradients at the anchor
    std::vector<int> hits;                   // sampled gradients within tol of each target
    std::vector<GradientPair> sampled;       // usable finite-difference gradients
    int stray = 0;                           // sampled gradients far from every target
    int samples = 0;
    bool resolved = false;                   // every target hit
};

/// Samples points within `radius` of a (typically singular) anchor, keeps Regular ones
/// with a clean stencil and matches their gradients against the reachable set.
ApproachReport approachability(const HJProblem& prob, double t0, const Vec& x0, double radius, int samples,
                               double tol, double h, std::uint64_t seed = 11);

}  // namespace hjhopf
