#include "tsvar/expr.hpp"

#include "tsvar/errors.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <sstream>

namespace tsvar {

using NodePtr = std::shared_ptr<const Expr::Node>;

namespace {

struct FuncInfo {
    Func func;
    const char* name;
};

constexpr std::array<FuncInfo, 7> kFuncs{{
    {Func::Sin, "sin"},
    {Func::Cos, "cos"},
    {Func::Exp, "exp"},
    {Func::Log, "log"},
    {Func::Sqrt, "sqrt"},
    {Func::Abs, "abs"},
    {Func::Sign, "sign"},
}};

const char* func_name(Func f)
{
    for (const auto& info : kFuncs)
        if (info.func == f)
            return info.name;
    return "?";
}

// Shared checked arithmetic so that the tree walker and the compiled program agree exactly.

double checked(double r, const char* what, double t)
{
    if (!std::isfinite(r))
        throw EvalError(std::string("non-finite result of ") + what, t);
    return r;
}

double apply_func(Func f, double x, double t)
{
    switch (f) {
    case Func::Sin:
        return checked(std::sin(x), "sin", t);
    case Func::Cos:
        return checked(std::cos(x), "cos", t);
    case Func::Exp:
        return checked(std::exp(x), "exp", t);
    case Func::Log:
        if (!(x > 0.0))
            throw EvalError("log of non-positive value " + detail::format_double(x), t);
        return std::log(x);
    case Func::Sqrt:
        if (x < 0.0)
            throw EvalError("sqrt of negative value " + detail::format_double(x), t);
        return std::sqrt(x);
    case Func::Abs:
        return std::abs(x);
    case Func::Sign:
        return static_cast<double>((x > 0.0) - (x < 0.0));
    }
    return 0.0;
}

double apply_binary(NodeKind k, double a, double b, double t)
{
    switch (k) {
    case NodeKind::Add:
        return checked(a + b, "addition", t);
    case NodeKind::Sub:
        return checked(a - b, "subtraction", t);
    case NodeKind::Mul:
        return checked(a * b, "multiplication", t);
    case NodeKind::Div:
        if (b == 0.0)
            throw EvalError("division by zero", t);
        return checked(a / b, "division", t);
    case NodeKind::Pow:
        if (b != std::nearbyint(b) && !(a > 0.0))
            throw EvalError("non-integer power of non-positive base " + detail::format_double(a), t);
        if (a == 0.0 && b < 0.0)
            throw EvalError("division by zero in negative power", t);
        return checked(std::pow(a, b), "power", t);
    default:
        return 0.0;
    }
}

NodePtr make_binary_node(NodeKind kind, NodePtr a, NodePtr b)
{
    auto n = std::make_shared<Expr::Node>();
    n->kind = kind;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

// Folds two constants when the result is a finite, valid value; otherwise keeps the node so
// that the error surfaces at evaluation time with a meaningful t.
bool try_fold(NodeKind k, double a, double b, double& out)
{
    try {
        out = apply_binary(k, a, b, 0.0);
        return true;
    } catch (const EvalError&) {
        return false;
    }
}

int precedence(const Expr::Node& n)
{
    switch (n.kind) {
    case NodeKind::Add:
    case NodeKind::Sub:
        return 1;
    case NodeKind::Mul:
    case NodeKind::Div:
        return 2;
    case NodeKind::Neg:
        return 3;
    case NodeKind::Pow:
        return 4;
    default:
        return 5;
    }
}

void print(const Expr::Node& n, std::ostream& os);

void print_child(const Expr::Node& child, int min_prec, std::ostream& os)
{
    if (precedence(child) < min_prec) {
        os << '(';
        print(child, os);
        os << ')';
    } else {
        print(child, os);
    }
}

void print(const Expr::Node& n, std::ostream& os)
{
    switch (n.kind) {
    case NodeKind::Const:
        if (std::signbit(n.value))
            os << '(' << detail::format_double(n.value) << ')';
        else
            os << detail::format_double(n.value);
        return;
    case NodeKind::Var:
        os << n.var.name();
        return;
    case NodeKind::Neg:
        os << '-';
        print_child(*n.a, 3, os);
        return;
    case NodeKind::Call:
        os << func_name(n.func) << '(';
        print(*n.a, os);
        os << ')';
        return;
    case NodeKind::Pow:
        print_child(*n.a, 5, os);
        os << '^';
        print_child(*n.b, 3, os);
        return;
    default: {
        const int p = precedence(n);
        const char op = n.kind == NodeKind::Add ? '+' : n.kind == NodeKind::Sub ? '-' : n.kind == NodeKind::Mul ? '*' : '/';
        print_child(*n.a, p, os);
        os << op;
        print_child(*n.b, p + 1, os);
        return;
    }
    }
}

const char* kind_name(NodeKind k)
{
    switch (k) {
    case NodeKind::Neg:
        return "Neg";
    case NodeKind::Add:
        return "Add";
    case NodeKind::Sub:
        return "Sub";
    case NodeKind::Mul:
        return "Mul";
    case NodeKind::Div:
        return "Div";
    case NodeKind::Pow:
        return "Pow";
    default:
        return "?";
    }
}

void print_tree(const Expr::Node& n, std::ostream& os)
{
    switch (n.kind) {
    case NodeKind::Const:
        os << detail::format_double(n.value);
        return;
    case NodeKind::Var:
        os << n.var.name();
        return;
    case NodeKind::Call:
        os << func_name(n.func) << '(';
        print_tree(*n.a, os);
        os << ')';
        return;
    case NodeKind::Neg:
        os << "Neg(";
        print_tree(*n.a, os);
        os << ')';
        return;
    default:
        os << kind_name(n.kind) << '(';
        print_tree(*n.a, os);
        os << ", ";
        print_tree(*n.b, os);
        os << ')';
        return;
    }
}

double eval_node(const Expr::Node& n, double t, std::span<const double> y, std::span<const double> v)
{
    switch (n.kind) {
    case NodeKind::Const:
        return n.value;
    case NodeKind::Var:
        switch (n.var.kind) {
        case Variable::Kind::T:
            return t;
        case Variable::Kind::Y:
            return y[static_cast<std::size_t>(n.var.index - 1)];
        case Variable::Kind::V:
            return v[static_cast<std::size_t>(n.var.index - 1)];
        }
        return 0.0;
    case NodeKind::Neg:
        return -eval_node(*n.a, t, y, v);
    case NodeKind::Call:
        return apply_func(n.func, eval_node(*n.a, t, y, v), t);
    default: {
        const double a = eval_node(*n.a, t, y, v);
        const double b = eval_node(*n.b, t, y, v);
        return apply_binary(n.kind, a, b, t);
    }
    }
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    Parser(std::string_view text, int dim)
        : text_(text)
        , dim_(dim)
    {}

    Expr run()
    {
        skip_ws();
        if (pos_ >= text_.size())
            throw ParseError("empty expression", pos_);
        Expr e = parse_sum();
        skip_ws();
        if (pos_ < text_.size())
            throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        return e;
    }

private:
    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    // Parsing builds raw nodes (no folding) so that the tree mirrors the text.
    static Expr binary(NodeKind k, const Expr& a, const Expr& b) { return Expr::unfolded(k, a, b); }
    static Expr negate(const Expr& a) { return Expr::unfolded(NodeKind::Neg, a); }

    Expr parse_sum()
    {
        Expr lhs = parse_product();
        for (;;) {
            if (accept('+'))
                lhs = binary(NodeKind::Add, lhs, parse_product());
            else if (accept('-'))
                lhs = binary(NodeKind::Sub, lhs, parse_product());
            else
                return lhs;
        }
    }

    Expr parse_product()
    {
        Expr lhs = parse_unary();
        for (;;) {
            if (accept('*'))
                lhs = binary(NodeKind::Mul, lhs, parse_unary());
            else if (accept('/'))
                lhs = binary(NodeKind::Div, lhs, parse_unary());
            else
                return lhs;
        }
    }

    Expr parse_unary()
    {
        if (accept('-'))
            return negate(parse_unary());
        return parse_power();
    }

    Expr parse_power()
    {
        Expr base = parse_primary();
        if (accept('^'))
            return binary(NodeKind::Pow, base, parse_unary());
        return base;
    }

    Expr parse_primary()
    {
        skip_ws();
        if (pos_ >= text_.size())
            throw ParseError("unexpected end of expression", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = parse_sum();
            if (!accept(')'))
                throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return parse_identifier();
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    Expr parse_number()
    {
        const std::size_t start = pos_;
        const auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t count = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            count += digits();
        }
        if (count == 0)
            throw ParseError("malformed number", start);
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-'))
                ++look;
            if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                pos_ = look;
                digits();
            }
        }
        const auto v = detail::parse_double(text_.substr(start, pos_ - start));
        if (!v)
            throw ParseError("malformed number", start);
        return Expr::constant(*v);
    }

    Expr parse_identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size()
               && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string_view id = text_.substr(start, pos_ - start);

        for (const auto& info : kFuncs) {
            if (id == info.name) {
                if (!accept('('))
                    throw ParseError("expected '(' after " + std::string(id), pos_);
                Expr arg = parse_sum();
                if (!accept(')'))
                    throw ParseError("expected ')'", pos_);
                return Expr::call(info.func, arg);
            }
        }
        if (id == "t")
            return Expr::variable(Variable::time());
        if ((id.front() == 'y' || id.front() == 'v') && id.size() > 1
            && std::all_of(id.begin() + 1, id.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
            int k = 0;
            for (char ch : id.substr(1)) {
                k = k * 10 + (ch - '0');
                if (k > 1'000'000)
                    break;
            }
            if (k < 1)
                throw ParseError("variable index must start at 1: " + std::string(id), start);
            if (k > dim_)
                throw ParseError("variable " + std::string(id) + " exceeds dimension " + std::to_string(dim_), start);
            return Expr::variable(id.front() == 'y' ? Variable::y(k) : Variable::v(k));
        }
        throw ParseError("unknown identifier '" + std::string(id) + "'", start);
    }

    std::string_view text_;
    int dim_;
    std::size_t pos_ = 0;
};

} // namespace

// ---------------------------------------------------------------------------

std::string Variable::name() const
{
    switch (kind) {
    case Kind::T:
        return "t";
    case Kind::Y:
        return "y" + std::to_string(index);
    case Kind::V:
        return "v" + std::to_string(index);
    }
    return "?";
}

Expr::Expr()
    : Expr(constant(0.0))
{}

Expr::Expr(std::shared_ptr<const Node> node)
    : node_(std::move(node))
{}

Expr Expr::constant(double c)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Const;
    n->value = c;
    return Expr(std::move(n));
}

Expr Expr::variable(Variable v)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Var;
    n->var = v;
    return Expr(std::move(n));
}

Expr Expr::call(Func f, Expr arg)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Call;
    n->func = f;
    n->a = std::move(arg.node_);
    return Expr(std::move(n));
}

NodeKind Expr::kind() const noexcept { return node_->kind; }

double Expr::value() const
{
    if (kind() != NodeKind::Const)
        throw DomainError("expression is not a constant");
    return node_->value;
}

Variable Expr::var() const
{
    if (kind() != NodeKind::Var)
        throw DomainError("expression is not a variable");
    return node_->var;
}

Func Expr::func() const
{
    if (kind() != NodeKind::Call)
        throw DomainError("expression is not a function call");
    return node_->func;
}

Expr Expr::lhs() const
{
    if (!node_->a)
        throw DomainError("expression has no operand");
    return Expr(node_->a);
}

Expr Expr::rhs() const
{
    if (!node_->b)
        throw DomainError("expression has no right operand");
    return Expr(node_->b);
}

bool Expr::is_constant(double c) const noexcept
{
    return kind() == NodeKind::Const && node_->value == c;
}

int Expr::max_index() const noexcept
{
    const Node& n = *node_;
    int m = n.kind == NodeKind::Var ? n.var.index : 0;
    if (n.a)
        m = std::max(m, Expr(n.a).max_index());
    if (n.b)
        m = std::max(m, Expr(n.b).max_index());
    return m;
}

bool Expr::depends_on(Variable v) const noexcept
{
    const Node& n = *node_;
    if (n.kind == NodeKind::Var)
        return n.var == v;
    return (n.a && Expr(n.a).depends_on(v)) || (n.b && Expr(n.b).depends_on(v));
}

std::size_t Expr::node_count() const noexcept
{
    const Node& n = *node_;
    return 1 + (n.a ? Expr(n.a).node_count() : 0) + (n.b ? Expr(n.b).node_count() : 0);
}

std::string Expr::to_string() const
{
    std::ostringstream os;
    print(*node_, os);
    return os.str();
}

std::string Expr::tree_string() const
{
    std::ostringstream os;
    print_tree(*node_, os);
    return os.str();
}

Expr Expr::unfolded(NodeKind kind, const Expr& a, const Expr& b)
{
    switch (kind) {
    case NodeKind::Neg:
        return Expr(make_binary_node(NodeKind::Neg, a.node_, nullptr));
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::Div:
    case NodeKind::Pow:
        return Expr(make_binary_node(kind, a.node_, b.node_));
    default:
        throw DomainError("unfolded() builds operator nodes only");
    }
}

Expr operator+(const Expr& a, const Expr& b)
{
    double folded = 0.0;
    if (a.is_constant() && b.is_constant() && try_fold(NodeKind::Add, a.value(), b.value(), folded))
        return Expr::constant(folded);
    if (a.is_constant(0.0))
        return b;
    if (b.is_constant(0.0))
        return a;
    return Expr::unfolded(NodeKind::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b)
{
    double folded = 0.0;
    if (a.is_constant() && b.is_constant() && try_fold(NodeKind::Sub, a.value(), b.value(), folded))
        return Expr::constant(folded);
    if (b.is_constant(0.0))
        return a;
    if (a.is_constant(0.0))
        return -b;
    return Expr::unfolded(NodeKind::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b)
{
    double folded = 0.0;
    if (a.is_constant() && b.is_constant() && try_fold(NodeKind::Mul, a.value(), b.value(), folded))
        return Expr::constant(folded);
    if (a.is_constant(0.0) || b.is_constant(0.0))
        return Expr::constant(0.0);
    if (a.is_constant(1.0))
        return b;
    if (b.is_constant(1.0))
        return a;
    if (a.is_constant(-1.0))
        return -b;
    if (b.is_constant(-1.0))
        return -a;
    return Expr::unfolded(NodeKind::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b)
{
    double folded = 0.0;
    if (a.is_constant() && b.is_constant() && try_fold(NodeKind::Div, a.value(), b.value(), folded))
        return Expr::constant(folded);
    if (b.is_constant(1.0))
        return a;
    if (a.is_constant(0.0) && !b.is_constant(0.0))
        return Expr::constant(0.0);
    return Expr::unfolded(NodeKind::Div, a, b);
}

Expr operator-(const Expr& a)
{
    if (a.is_constant())
        return Expr::constant(-a.value());
    if (a.kind() == NodeKind::Neg)
        return a.lhs();
    return Expr::unfolded(NodeKind::Neg, a);
}

Expr pow(const Expr& base, const Expr& exponent)
{
    double folded = 0.0;
    if (base.is_constant() && exponent.is_constant()
        && try_fold(NodeKind::Pow, base.value(), exponent.value(), folded))
        return Expr::constant(folded);
    if (exponent.is_constant(1.0))
        return base;
    if (exponent.is_constant(0.0))
        return Expr::constant(1.0);
    return Expr::unfolded(NodeKind::Pow, base, exponent);
}

Expr parse_expr(std::string_view text, int dim)
{
    if (dim < 1)
        throw DimensionError("expression dimension must be at least 1");
    return Parser(text, dim).run();
}

double eval(const Expr& e, double t, std::span<const double> y, std::span<const double> v)
{
    const auto need = static_cast<std::size_t>(e.max_index());
    if (y.size() < need || v.size() < need)
        throw DimensionError("expression needs " + std::to_string(need) + " components");
    return eval_node(e.node(), t, y, v);
}

Expr diff(const Expr& e, Variable wrt)
{
    switch (e.kind()) {
    case NodeKind::Const:
        return Expr::constant(0.0);
    case NodeKind::Var:
        return Expr::constant(e.var() == wrt ? 1.0 : 0.0);
    case NodeKind::Neg:
        return -diff(e.lhs(), wrt);
    case NodeKind::Add:
        return diff(e.lhs(), wrt) + diff(e.rhs(), wrt);
    case NodeKind::Sub:
        return diff(e.lhs(), wrt) - diff(e.rhs(), wrt);
    case NodeKind::Mul: {
        const Expr u = e.lhs();
        const Expr w = e.rhs();
        return diff(u, wrt) * w + u * diff(w, wrt);
    }
    case NodeKind::Div: {
        const Expr u = e.lhs();
        const Expr w = e.rhs();
        const Expr du = diff(u, wrt);
        const Expr dw = diff(w, wrt);
        if (dw.is_constant(0.0))
            return du / w;
        return (du * w - u * dw) / pow(w, Expr::constant(2.0));
    }
    case NodeKind::Pow: {
        const Expr u = e.lhs();
        const Expr w = e.rhs();
        const Expr du = diff(u, wrt);
        const Expr dw = diff(w, wrt);
        if (dw.is_constant(0.0))
            return w * pow(u, w - Expr::constant(1.0)) * du;
        // d(u^w) = u^w (w' log u + w u'/u)
        return e * (dw * Expr::call(Func::Log, u) + w * du / u);
    }
    case NodeKind::Call: {
        const Expr u = e.lhs();
        const Expr du = diff(u, wrt);
        if (du.is_constant(0.0))
            return Expr::constant(0.0);
        switch (e.func()) {
        case Func::Sin:
            return Expr::call(Func::Cos, u) * du;
        case Func::Cos:
            return -(Expr::call(Func::Sin, u) * du);
        case Func::Exp:
            return e * du;
        case Func::Log:
            return du / u;
        case Func::Sqrt:
            return du / (Expr::constant(2.0) * e);
        case Func::Abs:
            return Expr::call(Func::Sign, u) * du;
        case Func::Sign:
            return Expr::constant(0.0);
        }
    }
    }
    return Expr::constant(0.0);
}

Expr weighted_sum(std::span<const double> weights, std::span<const Expr> terms)
{
    if (weights.size() != terms.size())
        throw DimensionError("weight count differs from term count");
    Expr sum = Expr::constant(0.0);
    for (std::size_t i = 0; i < terms.size(); ++i)
        sum = sum + Expr::constant(weights[i]) * terms[i];
    return sum;
}

// ---------------------------------------------------------------------------

CompiledExpr::CompiledExpr(const Expr& e)
{
    emit(e.node());
    zero_ = e.is_constant(0.0);
    std::size_t d = 0;
    for (const Instr& ins : code_) {
        switch (ins.op) {
        case Op::Const:
        case Op::T:
        case Op::Y:
        case Op::V:
            ++d;
            break;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
        case Op::Pow:
            --d;
            break;
        default:
            break;
        }
        depth_ = std::max(depth_, d);
    }
}

void CompiledExpr::emit(const Expr::Node& n)
{
    switch (n.kind) {
    case NodeKind::Const:
        code_.push_back({Op::Const, 0, n.value});
        return;
    case NodeKind::Var:
        switch (n.var.kind) {
        case Variable::Kind::T:
            code_.push_back({Op::T, 0, 0.0});
            return;
        case Variable::Kind::Y:
            code_.push_back({Op::Y, n.var.index - 1, 0.0});
            return;
        case Variable::Kind::V:
            code_.push_back({Op::V, n.var.index - 1, 0.0});
            return;
        }
        return;
    case NodeKind::Neg:
        emit(*n.a);
        code_.push_back({Op::Neg, 0, 0.0});
        return;
    case NodeKind::Call: {
        emit(*n.a);
        static constexpr Op by_func[] = {Op::Sin, Op::Cos, Op::Exp, Op::Log, Op::Sqrt, Op::Abs, Op::Sign};
        code_.push_back({by_func[static_cast<int>(n.func)], 0, 0.0});
        return;
    }
    default: {
        emit(*n.a);
        emit(*n.b);
        Op op = Op::Add;
        switch (n.kind) {
        case NodeKind::Sub:
            op = Op::Sub;
            break;
        case NodeKind::Mul:
            op = Op::Mul;
            break;
        case NodeKind::Div:
            op = Op::Div;
            break;
        case NodeKind::Pow:
            op = Op::Pow;
            break;
        default:
            break;
        }
        code_.push_back({op, 0, 0.0});
        return;
    }
    }
}

double CompiledExpr::operator()(double t, const double* y, const double* v) const
{
    if (code_.empty())
        return 0.0;
    constexpr std::size_t kInline = 64;
    std::array<double, kInline> local;
    std::vector<double> heap;
    double* stack = local.data();
    if (depth_ > kInline) {
        heap.resize(depth_);
        stack = heap.data();
    }
    std::size_t sp = 0;
    for (const Instr& ins : code_) {
        switch (ins.op) {
        case Op::Const:
            stack[sp++] = ins.value;
            break;
        case Op::T:
            stack[sp++] = t;
            break;
        case Op::Y:
            stack[sp++] = y[ins.index];
            break;
        case Op::V:
            stack[sp++] = v[ins.index];
            break;
        case Op::Neg:
            stack[sp - 1] = -stack[sp - 1];
            break;
        case Op::Add:
            --sp;
            stack[sp - 1] = apply_binary(NodeKind::Add, stack[sp - 1], stack[sp], t);
            break;
        case Op::Sub:
            --sp;
            stack[sp - 1] = apply_binary(NodeKind::Sub, stack[sp - 1], stack[sp], t);
            break;
        case Op::Mul:
            --sp;
            stack[sp - 1] = apply_binary(NodeKind::Mul, stack[sp - 1], stack[sp], t);
            break;
        case Op::Div:
            --sp;
            stack[sp - 1] = apply_binary(NodeKind::Div, stack[sp - 1], stack[sp], t);
            break;
        case Op::Pow:
            --sp;
            stack[sp - 1] = apply_binary(NodeKind::Pow, stack[sp - 1], stack[sp], t);
            break;
        case Op::Sin:
            stack[sp - 1] = apply_func(Func::Sin, stack[sp - 1], t);
            break;
        case Op::Cos:
            stack[sp - 1] = apply_func(Func::Cos, stack[sp - 1], t);
            break;
        case Op::Exp:
            stack[sp - 1] = apply_func(Func::Exp, stack[sp - 1], t);
            break;
        case Op::Log:
            stack[sp - 1] = apply_func(Func::Log, stack[sp - 1], t);
            break;
        case Op::Sqrt:
            stack[sp - 1] = apply_func(Func::Sqrt, stack[sp - 1], t);
            break;
        case Op::Abs:
            stack[sp - 1] = apply_func(Func::Abs, stack[sp - 1], t);
            break;
        case Op::Sign:
            stack[sp - 1] = apply_func(Func::Sign, stack[sp - 1], t);
            break;
        }
    }
    return stack[0];
}

} // namespace tsvar
