#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "hjhopf/expr.hpp"
#include "hjhopf/quadrature.hpp"
#include "hjhopf/vec.hpp"

namespace hjhopf {

/// Value of sigma*(q) for q outside the effective domain.
inline constexpr double kPlusInf = std::numeric_limits<double>::infinity();

struct ConjugatePoint {
    double value = kPlusInf;
    Vec argmax;             // maximizing x (empty when a closed form was used)
    bool boundary = false;  // maximizer pressed against the search box
};

/// Convex initial datum sigma(x) together with what is needed to conjugate it.
class ConvexData {
public:
    /// Validates box volume and sampled midpoint convexity (1000 seeded pairs).
    /// `closed_form` is an expression in q1..qn for sigma*; where it raises a
    /// DomainError, q is taken to lie outside dom sigma*.
    ConvexData(expr::Expr sigma, Box x_box, std::optional<expr::Expr> closed_form = std::nullopt,
               std::optional<double> lipschitz_hint = std::nullopt);

    int dim() const noexcept { return sigma_.dim(); }
    const expr::Expr& sigma() const noexcept { return sigma_; }
    const Box& x_box() const noexcept { return x_box_; }
    const std::optional<expr::Expr>& closed_form() const noexcept { return closed_form_; }
    std::optional<double> lipschitz_hint() const noexcept { return lipschitz_hint_; }

    double sigma_value(const Vec& x) const;
    Vec sigma_gradient(const Vec& x) const;

    /// Memo for numeric conjugation; shared by copies.
    MemoTable<ConjugatePoint>& memo() const { return *memo_; }

private:
    expr::Expr sigma_;
    Box x_box_;
    std::optional<expr::Expr> closed_form_;
    std::optional<double> lipschitz_hint_;
    std::shared_ptr<MemoTable<ConjugatePoint>> memo_;
};

/// sup over the x-box of <x,q> - sigma(x): 64-per-axis grid, local ascent polish, and a
/// box-doubling escape test. Returns kPlusInf when the maximizer sits on the box boundary
/// and doubling the box raises the sup by more than 1e-6.
ConjugatePoint conjugate_numeric(const ConvexData& c, const Vec& q);

/// sigma*(q): the closed form when declared, otherwise conjugate_numeric.
double conjugate_value(const ConvexData& c, const Vec& q);

/// Gradient of sigma* at q: derivative of the closed form, or the conjugate maximizer.
Vec conjugate_gradient(const ConvexData& c, const Vec& q);

/// One-sided slopes of sigma* at p0. For n = 1, [lower, upper] are the left and right
/// derivatives; infinite slopes set the unbounded flags. For n > 1, `slopes` holds
/// either the stable gradient or a sampled set of supporting slopes (`sampled`).
struct Subdifferential {
    double lower = 0.0;
    double upper = 0.0;
    bool unbounded_above = false;
    bool unbounded_below = false;
    std::vector<Vec> slopes;
    bool sampled = false;

    bool is_singleton(double tol = 1e-6) const {
        return !unbounded_above && !unbounded_below && !sampled && upper - lower <= tol;
    }
};

Subdifferential subdifferential(const ConvexData& c, const Vec& p0, double probe_radius);

/// Checks whether v is affine on [p, p0] with slope y in the sense
/// <y, p - p0> = v(p) - v(p0). Verifies y in dv(p0) first (PreconditionError if not).
/// When the equality holds, samples the segment and throws NumericError if v departs
/// from the supporting affine function (v cannot be convex).
bool check_affine_segment(const std::function<double(const Vec&)>& v, const Vec& p, const Vec& p0,
                          const Vec& y);

}  // namespace hjhopf
