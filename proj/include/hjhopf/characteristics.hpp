#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hjhopf/hopf.hpp"

namespace hjhopf {

/// Characteristic curve emanating from (0, y) with constant momentum p = grad sigma(y).
struct Characteristic {
    Vec y;
    Vec p;
};

Characteristic make_characteristic(const HJProblem& prob, const Vec& y);

/// x(t,y) = y + int_0^t H_p(tau, grad sigma(y)) dtau.
Vec curve_point(const HJProblem& prob, const Vec& y, double t);

/// v(t,y) = sigma(y) + int_0^t (<H_p(tau,p), p> - H(tau,p)) dtau with p = grad sigma(y).
double classical_value(const HJProblem& prob, const Vec& y, double t);

struct BackwardResult {
    Vec y;
    /// |grad sigma(y) - p0|; above 1e-6 the momentum does not reproduce p0.
    double momentum_mismatch = 0.0;
    bool mismatch_warning = false;
};

/// y = x0 - int_0^t0 H_p(tau, p0) dtau.
BackwardResult backward_initial(const HJProblem& prob, double t0, const Vec& x0, const Vec& p0);

struct InitialPoints {
    std::vector<Vec> roots;
    std::vector<double> residuals;  // |x(t0,y) - x0| per root
    bool best_effort = false;       // n >= 2: multistart without completeness claim
    int seeds = 0;                  // grid nodes (n = 1) or Newton starts (n >= 2)
};

/// ell*(t0,x0): every y in y_box whose characteristic passes through (t0,x0).
/// Throws NumericError when no root is found at the working resolution.
InitialPoints ell_star(const HJProblem& prob, double t0, const Vec& x0, const Box& y_box);
InitialPoints ell_star(const HJProblem& prob, double t0, const Vec& x0);

/// Precomputed y -> x(t,y) samples on a 1-D grid, reusable across many x0 at one t.
struct CurveGrid {
    double t = 0.0;
    std::vector<double> y;
    std::vector<double> x;
};
CurveGrid sample_curves(const HJProblem& prob, double t, const Box& y_box, int nodes);
InitialPoints ell_star_on(const HJProblem& prob, const CurveGrid& grid, double x0);

enum class CharType { TypeI, TypeII };
std::string to_string(CharType k);

struct CharClassification {
    CharType kind = CharType::TypeII;
    double t0 = 0.0;
    Vec x0;
    Vec y;
    MaximizerSet witness;  // ell(t0,x0)
    double distance = 0.0; // dist(grad sigma(y), ell(t0,x0))
    bool borderline = false;
};

/// Type I iff grad sigma(y) lies within match_tolerance of ell(t0,x0).
/// Requires |x(t0,y) - x0| <= 1e-6 (PreconditionError otherwise).
CharClassification classify_char(const HJProblem& prob, double t0, const Vec& x0, const Vec& y);
/// Same, reusing an already computed ell(t0,x0).
CharClassification classify_char(const HJProblem& prob, double t0, const Vec& x0, const Vec& y,
                                 const MaximizerSet& ell);

struct ThetaResult {
    double lo = 0.0;  // last time the momentum is the sole maximizer
    double hi = 0.0;  // first time it is not
    std::vector<std::pair<double, bool>> probes;  // (s, predicate) in probing order
};

/// Bisection for the time where the characteristic from y0 switches from type I to
/// type II. Needs a type II characteristic at (t0,x0) and a classified Hamiltonian.
/// H and sigma being C^2 is the caller's obligation. Throws NumericError when the
/// predicate is observed to be non-monotone.
ThetaResult transition_theta(const HJProblem& prob, double t0, const Vec& x0, const Vec& y0);

}  // namespace hjhopf
