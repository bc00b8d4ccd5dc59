#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "hjhopf/problem.hpp"
#include "hjhopf/vec.hpp"

namespace hjhopf {

/// Value of phi where sigma*(q) = +inf.
inline constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

/// Clustered global maximizers ell(t,x) of phi(t,x,.) over the q-box.
struct MaximizerSet {
    double value = kMinusInf;      // u(t,x)
    std::vector<Vec> points;       // cluster representatives within value_tolerance of the max
    std::vector<double> values;    // phi at each point
    double cluster_radius = 0.0;
    double value_tolerance = 0.0;
    bool boundary_contact = false;
    /// Best cluster value outside ell, if any.
    std::optional<double> runner_up;
    /// Total clusters found, including those below the tolerance band.
    int cluster_count = 0;

    bool singleton() const noexcept { return points.size() == 1; }
    /// Distance from q to the nearest point of ell.
    double distance_to(const Vec& q) const;
};

/// Integral of H(tau, q) over [0, t], adaptive Simpson at kQuadratureTol, memoized.
double cumulative_H(const HJProblem& prob, const Vec& q, double t);
/// Integral of H_p(tau, q) over [0, t].
Vec cumulative_H_p(const HJProblem& prob, const Vec& q, double t);

/// <x,q> - sigma*(q) - int_0^t H(tau,q) dtau; kMinusInf outside dom sigma*.
double phi(const HJProblem& prob, double t, const Vec& x, const Vec& q);
/// Gradient of phi in q: x - dsigma*(q) - int_0^t H_p(tau,q) dtau.
Vec phi_gradient(const HJProblem& prob, double t, const Vec& x, const Vec& q);

/// Seed-grid resolution used by evaluate for dimension n (64, 32, 12).
int evaluate_grid(int n);

/// u(t,x) and ell(t,x) for 0 <= t <= T via multistart maximization over the q-box.
/// Throws NumericError when phi is -inf on the whole box.
MaximizerSet evaluate(const HJProblem& prob, double t, const Vec& x);

/// Dense-grid argmax (with nested grid zooms around the best nodes) and the same
/// clustering rule. Independent of the ascent machinery; used as an oracle.
MaximizerSet argmax_brute(const HJProblem& prob, double t, const Vec& x, int grid_per_axis);

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct A1Report {
    Verdict verdict = Verdict::Inconclusive;
    std::optional<std::pair<double, Vec>> witness;  // (t, x) whose maximizer hit the q-box boundary
    double min_boundary_distance = 0.0;              // over every sampled maximizer
    int samples = 0;
};

/// Sampled surrogate for the local boundedness of maximizers: draws points with
/// |t-t0| + |x-x0| < r, t in [0,T), and inspects where their maximizers sit.
A1Report check_A1(const HJProblem& prob, double t0, const Vec& x0, double r, int samples,
                  std::uint64_t seed = 1);

}  // namespace hjhopf
