#pragma once

// Scalar expressions over t, x1..xn and p1..pn (q1..qn is an alias of p1..pn).
//
// Grammar, lowest to highest precedence:
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | variable | func '(' sum ')' | '(' sum ')'
//   func    := ln | exp | sin | cos | sqrt | abs
//
// In dimension 1 the bare names x, p and q are accepted for x1, p1 and q1.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hjhopf/vec.hpp"

namespace hjhopf::expr {

enum class VarKind : std::uint8_t { Time, Space, Momentum };

struct Variable {
    VarKind kind = VarKind::Time;
    int index = 0;  // 0-based; ignored for Time
    char letter = 't';

    friend bool operator==(const Variable& a, const Variable& b) noexcept {
        return a.kind == b.kind && (a.kind == VarKind::Time || a.index == b.index);
    }
};

/// Resolves an identifier such as "x2" or "q1"; throws ConfigError on unknown names.
Variable resolve_variable(std::string_view name, int dim);
std::string variable_name(const Variable& v);

/// Values for t, x and p. Unset slots are NaN and raise on use.
class Bindings {
public:
    explicit Bindings(int dim);
    Bindings(int dim, double t, const Vec& x, const Vec& p);

    int dim() const noexcept { return dim_; }
    void set(std::string_view name, double value);
    void set(const Variable& v, double value) noexcept;
    double get(const Variable& v) const noexcept;

    double t;
    Vec x;
    Vec p;

private:
    int dim_;
};

enum class Op : std::uint8_t {
    Const, Var,
    Neg, Ln, Exp, Sin, Cos, Sqrt, Abs,
    Add, Sub, Mul, Div, Pow,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op = Op::Const;
    double value = 0.0;
    Variable var{};
    NodePtr lhs;
    NodePtr rhs;
};

/// Value and first derivative along one seeded variable.
struct Dual {
    double v = 0.0;
    double d = 0.0;
};

/// Immutable parsed expression. Copies share the tree.
class Expr {
public:
    Expr() = default;

    static Expr parse(std::string_view text, int dim);
    static Expr constant(double c, int dim);

    int dim() const noexcept { return dim_; }
    const NodePtr& root() const noexcept { return root_; }
    bool empty() const noexcept { return root_ == nullptr; }

    /// IEEE evaluation; non-finite results and out-of-domain arguments throw DomainError.
    double eval(const Bindings& b) const;
    /// Forward-mode derivative with respect to `wrt`.
    Dual eval_dual(const Bindings& b, const Variable& wrt) const;
    double derivative(const Variable& wrt, const Bindings& b) const { return eval_dual(b, wrt).d; }
    double derivative(std::string_view wrt, const Bindings& b) const;
    /// Gradient with respect to every x_i (Space) or p_i (Momentum).
    Vec gradient(VarKind kind, const Bindings& b) const;

    bool depends_on(VarKind kind) const noexcept;
    /// Fully parenthesized text that parses back to an equivalent tree.
    std::string to_string() const;

private:
    struct Instr {
        Op op;
        double value;
        Variable var;
    };

    template <class T>
    T run(const Bindings& b, const Variable* wrt) const;

    NodePtr root_;
    std::vector<Instr> program_;
    int dim_ = 0;
    int stack_depth_ = 0;
};

}  // namespace hjhopf::expr
