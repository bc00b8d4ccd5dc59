#include "hjhopf/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace hjhopf::expr {
namespace {

constexpr int kMaxStack = 128;
constexpr double kUnbound = std::numeric_limits<double>::quiet_NaN();

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct Function {
    std::string_view name;
    Op op;
};
constexpr std::array<Function, 6> kFunctions{{
    {"ln", Op::Ln}, {"exp", Op::Exp}, {"sin", Op::Sin},
    {"cos", Op::Cos}, {"sqrt", Op::Sqrt}, {"abs", Op::Abs},
}};

NodePtr make_unary(Op op, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(a);
    return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

class Parser {
public:
    Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

    NodePtr parse() {
        skip_ws();
        if (pos_ == text_.size()) throw SyntaxError("empty expression", pos_);
        NodePtr e = sum();
        skip_ws();
        if (pos_ != text_.size())
            throw SyntaxError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr sum() {
        NodePtr lhs = product();
        for (;;) {
            if (accept('+')) lhs = make_binary(Op::Add, lhs, product());
            else if (accept('-')) lhs = make_binary(Op::Sub, lhs, product());
            else return lhs;
        }
    }

    NodePtr product() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make_binary(Op::Mul, lhs, unary());
            else if (accept('/')) lhs = make_binary(Op::Div, lhs, unary());
            else return lhs;
        }
    }

    NodePtr unary() {
        if (++depth_ > kMaxStack) throw SyntaxError("expression nested too deeply", pos_);
        NodePtr out;
        if (accept('-')) out = make_unary(Op::Neg, unary());
        else if (accept('+')) out = unary();
        else out = power();
        --depth_;
        return out;
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make_binary(Op::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ == text_.size()) throw SyntaxError("expected operand", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = sum();
            if (!accept(')')) throw SyntaxError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
            if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                pos_ = look;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            }
        }
        double value = 0.0;
        const auto [end, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec != std::errc() || end != text_.data() + pos_)
            throw SyntaxError("malformed number", start);
        auto n = std::make_shared<Node>();
        n->op = Op::Const;
        n->value = value;
        return n;
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);
        for (const auto& f : kFunctions) {
            if (f.name != name) continue;
            if (!accept('(')) throw SyntaxError("expected '(' after " + std::string(name), pos_);
            NodePtr arg = sum();
            if (!accept(')')) throw SyntaxError("expected ')'", pos_);
            return make_unary(f.op, arg);
        }
        Variable v;
        try {
            v = resolve_variable(name, dim_);
        } catch (const ConfigError& e) {
            throw SyntaxError(e.what(), start);
        }
        auto n = std::make_shared<Node>();
        n->op = Op::Var;
        n->var = v;
        return n;
    }

    std::string_view text_;
    int dim_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

void print(const Node& n, std::ostringstream& os) {
    switch (n.op) {
    case Op::Const:
        if (n.value < 0) os << "(-" << std::abs(n.value) << ")";
        else os << n.value;
        return;
    case Op::Var: os << variable_name(n.var); return;
    case Op::Neg: os << "(-"; print(*n.lhs, os); os << ")"; return;
    default: break;
    }
    for (const auto& f : kFunctions) {
        if (f.op == n.op) {
            os << f.name << "(";
            print(*n.lhs, os);
            os << ")";
            return;
        }
    }
    char sym = '+';
    switch (n.op) {
    case Op::Add: sym = '+'; break;
    case Op::Sub: sym = '-'; break;
    case Op::Mul: sym = '*'; break;
    case Op::Div: sym = '/'; break;
    case Op::Pow: sym = '^'; break;
    default: break;
    }
    os << "(";
    print(*n.lhs, os);
    os << sym;
    print(*n.rhs, os);
    os << ")";
}

int compile(const NodePtr& n, auto& program) {
    int depth = 1;
    if (n->lhs) depth = std::max(depth, compile(n->lhs, program));
    if (n->rhs) depth = std::max(depth, 1 + compile(n->rhs, program));
    program.push_back({n->op, n->value, n->var});
    return depth;
}

[[noreturn]] void domain(const char* what) { throw DomainError(what); }

inline double checked(double v, const char* what) {
    if (!std::isfinite(v)) domain(what);
    return v;
}

// Unary and binary rules shared by the value and dual evaluators.
inline double apply(Op op, double a) {
    switch (op) {
    case Op::Neg: return -a;
    case Op::Ln:
        if (!(a > 0)) domain("ln of non-positive argument");
        return std::log(a);
    case Op::Exp: return checked(std::exp(a), "exp overflow");
    case Op::Sin: return std::sin(a);
    case Op::Cos: return std::cos(a);
    case Op::Sqrt:
        if (a < 0) domain("sqrt of negative argument");
        return std::sqrt(a);
    case Op::Abs: return std::abs(a);
    default: return a;
    }
}

inline double apply(Op op, double a, double b) {
    switch (op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div:
        if (b == 0) domain("division by zero");
        return a / b;
    case Op::Pow: return checked(std::pow(a, b), "power out of domain");
    default: return a;
    }
}

inline Dual apply(Op op, Dual a) {
    const double v = apply(op, a.v);
    switch (op) {
    case Op::Neg: return {v, -a.d};
    case Op::Ln: return {v, a.d / a.v};
    case Op::Exp: return {v, v * a.d};
    case Op::Sin: return {v, std::cos(a.v) * a.d};
    case Op::Cos: return {v, -std::sin(a.v) * a.d};
    case Op::Sqrt:
        if (a.d == 0) return {v, 0.0};
        if (v == 0) domain("sqrt not differentiable at 0");
        return {v, a.d / (2 * v)};
    case Op::Abs:
        if (a.d == 0) return {v, 0.0};
        if (a.v == 0) domain("abs not differentiable at 0");
        return {v, a.v > 0 ? a.d : -a.d};
    default: return a;
    }
}

inline Dual apply(Op op, Dual a, Dual b) {
    const double v = apply(op, a.v, b.v);
    switch (op) {
    case Op::Add: return {v, a.d + b.d};
    case Op::Sub: return {v, a.d - b.d};
    case Op::Mul: return {v, a.d * b.v + a.v * b.d};
    case Op::Div: return {v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
    case Op::Pow: {
        double d = 0.0;
        if (a.d != 0) {
            if (b.v == 0) d = 0.0;
            else d += b.v * std::pow(a.v, b.v - 1) * a.d;
        }
        if (b.d != 0) {
            if (!(a.v > 0)) domain("power with variable exponent needs a positive base");
            d += v * std::log(a.v) * b.d;
        }
        return {v, checked(d, "power not differentiable here")};
    }
    default: return a;
    }
}

}  // namespace

Variable resolve_variable(std::string_view name, int dim) {
    if (name == "t") return {VarKind::Time, 0, 't'};
    if (name.empty()) throw ConfigError("empty identifier");
    const char letter = name.front();
    VarKind kind;
    if (letter == 'x') kind = VarKind::Space;
    else if (letter == 'p' || letter == 'q') kind = VarKind::Momentum;
    else throw ConfigError("unknown identifier '" + std::string(name) + "'");
    const std::string_view digits = name.substr(1);
    if (digits.empty()) {
        if (dim == 1) return {kind, 0, letter};
        throw ConfigError("identifier '" + std::string(name) + "' needs an index when dim > 1");
    }
    int index = 0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
    if (ec != std::errc() || end != digits.data() + digits.size() || index < 1)
        throw ConfigError("unknown identifier '" + std::string(name) + "'");
    if (index > dim)
        throw ConfigError("variable '" + std::string(name) + "' exceeds dimension " + std::to_string(dim));
    return {kind, index - 1, letter};
}

std::string variable_name(const Variable& v) {
    if (v.kind == VarKind::Time) return "t";
    return std::string(1, v.letter) + std::to_string(v.index + 1);
}

Bindings::Bindings(int dim) : t(kUnbound), x(dim, kUnbound), p(dim, kUnbound), dim_(dim) {}

Bindings::Bindings(int dim, double t_, const Vec& x_, const Vec& p_) : Bindings(dim) {
    t = t_;
    if (x_.size() == dim) x = x_;
    if (p_.size() == dim) p = p_;
}

void Bindings::set(std::string_view name, double value) { set(resolve_variable(name, dim_), value); }

void Bindings::set(const Variable& v, double value) noexcept {
    switch (v.kind) {
    case VarKind::Time: t = value; break;
    case VarKind::Space: x[v.index] = value; break;
    case VarKind::Momentum: p[v.index] = value; break;
    }
}

double Bindings::get(const Variable& v) const noexcept {
    switch (v.kind) {
    case VarKind::Time: return t;
    case VarKind::Space: return x[v.index];
    case VarKind::Momentum: return p[v.index];
    }
    return kUnbound;
}

Expr Expr::parse(std::string_view text, int dim) {
    if (dim < 1 || dim > kMaxDim) throw ConfigError("expression dimension out of range");
    Expr e;
    e.dim_ = dim;
    e.root_ = Parser(text, dim).parse();
    e.stack_depth_ = compile(e.root_, e.program_);
    if (e.stack_depth_ > kMaxStack) throw ConfigError("expression nested too deeply");
    return e;
}

Expr Expr::constant(double c, int dim) {
    if (dim < 1 || dim > kMaxDim) throw ConfigError("expression dimension out of range");
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = c;
    Expr e;
    e.dim_ = dim;
    e.root_ = n;
    e.stack_depth_ = compile(e.root_, e.program_);
    return e;
}

template <class T>
T Expr::run(const Bindings& b, const Variable* wrt) const {
    if (!root_) throw ConfigError("evaluating an empty expression");
    std::array<T, kMaxStack> stack;
    int top = 0;
    for (const Instr& in : program_) {
        switch (in.op) {
        case Op::Const:
            stack[top++] = T{in.value};
            break;
        case Op::Var: {
            const double v = b.get(in.var);
            if (std::isnan(v)) throw DomainError("unbound variable " + variable_name(in.var));
            if constexpr (std::is_same_v<T, Dual>)
                stack[top++] = Dual{v, (wrt && *wrt == in.var) ? 1.0 : 0.0};
            else
                stack[top++] = v;
            break;
        }
        case Op::Neg: case Op::Ln: case Op::Exp: case Op::Sin:
        case Op::Cos: case Op::Sqrt: case Op::Abs:
            stack[top - 1] = apply(in.op, stack[top - 1]);
            break;
        default:
            --top;
            stack[top - 1] = apply(in.op, stack[top - 1], stack[top]);
            break;
        }
    }
    if constexpr (std::is_same_v<T, Dual>) {
        checked(stack[0].v, "non-finite value");
        checked(stack[0].d, "non-finite derivative");
    } else {
        checked(stack[0], "non-finite value");
    }
    return stack[0];
}

double Expr::eval(const Bindings& b) const { return run<double>(b, nullptr); }

Dual Expr::eval_dual(const Bindings& b, const Variable& wrt) const { return run<Dual>(b, &wrt); }

double Expr::derivative(std::string_view wrt, const Bindings& b) const {
    return derivative(resolve_variable(wrt, dim_), b);
}

Vec Expr::gradient(VarKind kind, const Bindings& b) const {
    Vec g(dim_);
    for (int i = 0; i < dim_; ++i)
        g[i] = eval_dual(b, Variable{kind, i, kind == VarKind::Space ? 'x' : 'p'}).d;
    return g;
}

bool Expr::depends_on(VarKind kind) const noexcept {
    for (const Instr& in : program_)
        if (in.op == Op::Var && in.var.kind == kind) return true;
    return false;
}

std::string Expr::to_string() const {
    if (!root_) return {};
    std::ostringstream os;
    os.precision(17);
    print(*root_, os);
    return os.str();
}

}  // namespace hjhopf::expr
