#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tsvar {

/// Integrand variables: t, y_k = k-th component of y^sigma(t), v_k = k-th component of y^Delta(t).
struct Variable {
    enum class Kind { T, Y, V };

    Kind kind = Kind::T;
    int index = 0; // 1-based for Y and V, 0 for T

    static Variable time() { return {Kind::T, 0}; }
    static Variable y(int k) { return {Kind::Y, k}; }
    static Variable v(int k) { return {Kind::V, k}; }

    std::string name() const;
    friend bool operator==(const Variable&, const Variable&) = default;
};

enum class Func { Sin, Cos, Exp, Log, Sqrt, Abs, Sign };

enum class NodeKind { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call };

/// Immutable expression tree. Copies share structure.
class Expr {
public:
    struct Node;

    /// The constant 0.
    Expr();

    static Expr constant(double c);
    static Expr variable(Variable v);
    static Expr call(Func f, Expr arg);
    /// Builds an operator node exactly as given, without folding (b is ignored for Neg).
    static Expr unfolded(NodeKind kind, const Expr& a, const Expr& b = Expr());

    NodeKind kind() const noexcept;
    double value() const;       // Const only
    Variable var() const;       // Var only
    Func func() const;          // Call only
    Expr lhs() const;           // binary: left operand; Neg/Call: the operand
    Expr rhs() const;           // binary only

    bool is_constant() const noexcept { return kind() == NodeKind::Const; }
    bool is_constant(double c) const noexcept;

    /// Largest y/v index referenced (0 when none).
    int max_index() const noexcept;
    bool depends_on(Variable v) const noexcept;
    std::size_t node_count() const noexcept;

    /// Infix text that parses back to an equivalent tree.
    std::string to_string() const;
    /// Structural form, e.g. Pow(Sub(y1, 2), 2).
    std::string tree_string() const;

    const Node& node() const noexcept { return *node_; }

    // Folding constructors: constants combine, 0*x -> 0, x+0 -> x, x*1 -> x, x^1 -> x, x^0 -> 1.
    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    friend Expr pow(const Expr& base, const Expr& exponent);

private:
    explicit Expr(std::shared_ptr<const Node> node);

    std::shared_ptr<const Node> node_;
};

struct Expr::Node {
    NodeKind kind = NodeKind::Const;
    double value = 0.0;
    Variable var{};
    Func func = Func::Sin;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
};

/// Parses an integrand for dimension n. Precedence: ^ (right-assoc) > unary - > * / > + -.
/// Throws ParseError with the byte offset of the offending token.
Expr parse_expr(std::string_view text, int dim);

/// Tree-walking evaluation. Throws EvalError (carrying t) on log/sqrt domain errors, division by
/// zero, a non-integer power of a non-positive base, or any non-finite intermediate.
double eval(const Expr& e, double t, std::span<const double> y, std::span<const double> v);

/// Symbolic partial derivative. d|u|/du is sign(u), which is 0 at 0.
Expr diff(const Expr& e, Variable wrt);

/// Postfix program for the same expression; agrees with eval() bit for bit.
class CompiledExpr {
public:
    CompiledExpr() = default;
    explicit CompiledExpr(const Expr& e);

    double operator()(double t, const double* y, const double* v) const;

    bool is_zero() const noexcept { return zero_; }

private:
    enum class Op : unsigned char {
        Const, T, Y, V, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Log, Sqrt, Abs, Sign
    };
    struct Instr {
        Op op;
        int index;
        double value;
    };

    void emit(const Expr::Node& n);

    std::vector<Instr> code_;
    std::size_t depth_ = 0;
    bool zero_ = true;
};

/// Sum_i w_i * e_i built with folding (zero weights drop out).
Expr weighted_sum(std::span<const double> weights, std::span<const Expr> terms);

} // namespace tsvar
