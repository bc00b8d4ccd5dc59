#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hjhopf/conjugate.hpp"
#include "hjhopf/expr.hpp"
#include "hjhopf/quadrature.hpp"
#include "hjhopf/vec.hpp"

namespace hjhopf {

/// Structural class of H(t, .); type transitions need one of the classified kinds.
enum class A2Kind { ConvexInP, ConcaveInP, StrictlyConcaveInP, Separable, Unclassified };

std::string to_string(A2Kind k);
A2Kind a2_kind_from_string(const std::string& s);

/// H(t,p) = g(t) h(p) + k(t), with g of one sign on (0,T).
struct SeparableParts {
    expr::Expr g;
    expr::Expr h;
    expr::Expr k;
};

struct A2Class {
    A2Kind kind = A2Kind::Unclassified;
    std::optional<SeparableParts> parts;  // set iff kind == Separable
};

struct ProblemSpec {
    std::string name = "inline";
    double T = 1.0;
    expr::Expr H;                              // in t and p1..pn
    std::shared_ptr<const ConvexData> sigma;   // initial datum
    std::optional<expr::Expr> sigma_star;      // closed-form conjugate, overrides numerics
    Box q_box;
    A2Class a2;
    std::optional<Box> y_box;                  // search box for initial points
};

/// u_t + H(t, D_x u) = 0 on (0,T) x R^n, u(0,.) = sigma. Immutable after
/// construction apart from the write-once quadrature memo.
class HJProblem {
public:
    explicit HJProblem(ProblemSpec spec);

    const std::string& name() const noexcept { return spec_.name; }
    int dim() const noexcept { return spec_.q_box.dim(); }
    double horizon() const noexcept { return spec_.T; }
    const expr::Expr& hamiltonian() const noexcept { return spec_.H; }
    const ConvexData& sigma() const noexcept { return *spec_.sigma; }
    const std::optional<expr::Expr>& sigma_star_override() const noexcept { return spec_.sigma_star; }
    const Box& q_box() const noexcept { return spec_.q_box; }
    const A2Class& a2() const noexcept { return spec_.a2; }
    /// Initial-point search box: user value, else dsigma* of the q-box corners, else the sigma box.
    const Box& y_box() const noexcept { return y_box_; }

    double H(double t, const Vec& p) const;
    Vec H_p(double t, const Vec& p) const;
    double H_t(double t, const Vec& p) const;

    /// sigma*(q), +inf outside its effective domain.
    double sigma_star(const Vec& q) const;
    Vec sigma_star_gradient(const Vec& q) const;

    /// 1e-6 diam(q_box): maximizers closer than this are one cluster.
    double cluster_radius() const noexcept { return 1e-6 * spec_.q_box.diameter(); }
    /// 1e-5 diam(q_box): tolerance for "sigma_y(y) belongs to ell(t,x)".
    double match_tolerance() const noexcept { return 1e-5 * spec_.q_box.diameter(); }

    QuadratureCache& quadrature_memo() const { return *memo_; }
    MemoTable<Vec>& vector_memo() const { return *vector_memo_; }

private:
    ProblemSpec spec_;
    Box y_box_;
    std::shared_ptr<QuadratureCache> memo_;
    std::shared_ptr<MemoTable<Vec>> vector_memo_;
};

/// Built-in problems. `sample_box` is the x-region used by randomized checks.
struct CatalogEntry {
    std::shared_ptr<const HJProblem> problem;
    Box sample_box;
    std::string description;
};

std::vector<std::string> catalog_names();
/// Recognized parameters: T, q_lo, q_hi. Throws ConfigError for unknown names.
CatalogEntry catalog(const std::string& name, const std::map<std::string, double>& params = {});

}  // namespace hjhopf
