#include "lienard/expr.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <utility>

#include "lienard/error.hpp"

namespace lienard {

struct Expression::Node {
  Op op = Op::Const;
  double value = 0.0;
  std::string name;
  Expression lhs_expr{std::shared_ptr<const Node>()};  // empty for leaves
  Expression rhs_expr{std::shared_ptr<const Node>()};
  bool constant = true;
};

namespace {

bool is_unary_function(Op op) {
  switch (op) {
    case Op::Sin:
    case Op::Cos:
    case Op::Tan:
    case Op::Exp:
    case Op::Log:
    case Op::Sinh:
    case Op::Cosh:
    case Op::Tanh:
    case Op::Sqrt:
      return true;
    default:
      return false;
  }
}

bool is_binary(Op op) {
  return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div || op == Op::Pow;
}

const Expression& shared_zero() {
  static const Expression zero = Expression::constant(0.0);
  return zero;
}

}  // namespace

const char* op_name(Op op) {
  switch (op) {
    case Op::Const: return "const";
    case Op::Var: return "var";
    case Op::Neg: return "-";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Pow: return "^";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tan: return "tan";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sinh: return "sinh";
    case Op::Cosh: return "cosh";
    case Op::Tanh: return "tanh";
    case Op::Sqrt: return "sqrt";
  }
  return "?";
}

Expression::Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expression::Expression() : Expression(shared_zero()) {}

Expression Expression::constant(double value) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = value;
  return Expression(std::move(n));
}

Expression Expression::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->name = std::move(name);
  n->constant = false;
  return Expression(std::move(n));
}

Expression Expression::unary(Op op, Expression arg) {
  if (op != Op::Neg && !is_unary_function(op)) throw Error("not a unary operator");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->constant = arg.is_constant();
  n->lhs_expr = std::move(arg);
  return Expression(std::move(n));
}

Expression Expression::binary(Op op, Expression lhs, Expression rhs) {
  if (!is_binary(op)) throw Error("not a binary operator");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->constant = lhs.is_constant() && rhs.is_constant();
  n->lhs_expr = std::move(lhs);
  n->rhs_expr = std::move(rhs);
  return Expression(std::move(n));
}

Op Expression::op() const { return node_->op; }
double Expression::value() const { return node_->value; }
const std::string& Expression::name() const { return node_->name; }
const Expression& Expression::lhs() const { return node_->lhs_expr; }
const Expression& Expression::rhs() const { return node_->rhs_expr; }
bool Expression::is_constant() const { return node_->constant; }
bool Expression::is_const_value(double v) const {
  return node_->op == Op::Const && node_->value == v;
}

bool operator==(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::Const:
      return std::bit_cast<std::uint64_t>(a.value()) == std::bit_cast<std::uint64_t>(b.value());
    case Op::Var:
      return a.name() == b.name();
    default:
      break;
  }
  if (!(a.lhs() == b.lhs())) return false;
  return !is_binary(a.op()) || a.rhs() == b.rhs();
}

Expression operator-(const Expression& a) { return Expression::unary(Op::Neg, a); }
Expression operator+(const Expression& a, const Expression& b) { return Expression::binary(Op::Add, a, b); }
Expression operator-(const Expression& a, const Expression& b) { return Expression::binary(Op::Sub, a, b); }
Expression operator*(const Expression& a, const Expression& b) { return Expression::binary(Op::Mul, a, b); }
Expression operator/(const Expression& a, const Expression& b) { return Expression::binary(Op::Div, a, b); }
Expression operator+(const Expression& a, double b) { return a + Expression::constant(b); }
Expression operator+(double a, const Expression& b) { return Expression::constant(a) + b; }
Expression operator-(const Expression& a, double b) { return a - Expression::constant(b); }
Expression operator-(double a, const Expression& b) { return Expression::constant(a) - b; }
Expression operator*(const Expression& a, double b) { return a * Expression::constant(b); }
Expression operator*(double a, const Expression& b) { return Expression::constant(a) * b; }
Expression operator/(const Expression& a, double b) { return a / Expression::constant(b); }
Expression operator/(double a, const Expression& b) { return Expression::constant(a) / b; }
Expression pow(const Expression& base, const Expression& exponent) {
  return Expression::binary(Op::Pow, base, exponent);
}
Expression pow(const Expression& base, double exponent) {
  return pow(base, Expression::constant(exponent));
}
Expression sin(const Expression& a) { return Expression::unary(Op::Sin, a); }
Expression cos(const Expression& a) { return Expression::unary(Op::Cos, a); }
Expression tan(const Expression& a) { return Expression::unary(Op::Tan, a); }
Expression exp(const Expression& a) { return Expression::unary(Op::Exp, a); }
Expression log(const Expression& a) { return Expression::unary(Op::Log, a); }
Expression sinh(const Expression& a) { return Expression::unary(Op::Sinh, a); }
Expression cosh(const Expression& a) { return Expression::unary(Op::Cosh, a); }
Expression tanh(const Expression& a) { return Expression::unary(Op::Tanh, a); }
Expression sqrt(const Expression& a) { return Expression::unary(Op::Sqrt, a); }

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string format_constant(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void print(const Expression& e, std::string& out) {
  switch (e.op()) {
    case Op::Const: {
      if (std::signbit(e.value())) {
        out += "(-" + format_constant(-e.value()) + ")";
      } else {
        out += format_constant(e.value());
      }
      return;
    }
    case Op::Var:
      out += e.name();
      return;
    case Op::Neg:
      out += "(-";
      print(e.lhs(), out);
      out += ")";
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow:
      out += "(";
      print(e.lhs(), out);
      out += " ";
      out += op_name(e.op());
      out += " ";
      print(e.rhs(), out);
      out += ")";
      return;
    default:
      out += op_name(e.op());
      out += "(";
      print(e.lhs(), out);
      out += ")";
      return;
  }
}

}  // namespace

std::string to_string(const Expression& e) {
  std::string out;
  print(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct FunctionEntry {
  const char* name;
  Op op;
};

constexpr FunctionEntry kFunctions[] = {
    {"sin", Op::Sin},   {"cos", Op::Cos},   {"tan", Op::Tan},
    {"exp", Op::Exp},   {"log", Op::Log},   {"sinh", Op::Sinh},
    {"cosh", Op::Cosh}, {"tanh", Op::Tanh}, {"sqrt", Op::Sqrt},
};

class Parser {
 public:
  Parser(std::string_view text, std::string_view var) : text_(text), var_(var) {}

  Expression parse_all() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    Expression e = parse_sum();
    skip_space();
    if (pos_ < text_.size()) throw ParseError("unexpected character", pos_);
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expression parse_sum() {
    Expression e = parse_product();
    for (;;) {
      if (accept('+')) {
        e = e + parse_product();
      } else if (accept('-')) {
        e = e - parse_product();
      } else {
        return e;
      }
    }
  }

  Expression parse_product() {
    Expression e = parse_unary();
    for (;;) {
      if (accept('*')) {
        e = e * parse_unary();
      } else if (accept('/')) {
        e = e / parse_unary();
      } else {
        return e;
      }
    }
  }

  Expression parse_unary() {
    if (accept('-')) return -parse_unary();
    return parse_power();
  }

  Expression parse_power() {
    Expression base = parse_primary();
    if (accept('^')) return pow(base, parse_unary());
    return base;
  }

  Expression parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression inner = parse_sum();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError("unexpected character", pos_);
  }

  Expression parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t exp_pos = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw ParseError("malformed exponent", exp_pos);
    }
    const std::string literal(text_.substr(start, pos_ - start));
    return Expression::constant(std::strtod(literal.c_str(), nullptr));
  }

  Expression parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view ident = text_.substr(start, pos_ - start);
    if (ident == var_) return Expression::variable(std::string(ident));
    for (const auto& f : kFunctions) {
      if (ident == f.name) {
        if (!accept('(')) throw ParseError("expected '(' after function name", pos_);
        Expression arg = parse_sum();
        if (!accept(')')) throw ParseError("expected ')'", pos_);
        return Expression::unary(f.op, std::move(arg));
      }
    }
    throw UnknownIdentifierError(std::string(ident), start);
  }

  std::string_view text_;
  std::string_view var_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse(std::string_view text, std::string_view var_name) {
  return Parser(text, var_name).parse_all();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

[[noreturn]] void domain_fail(const Expression& node, const std::string& why) {
  throw DomainError(why + " in " + to_string(node));
}

bool is_integer(double v) { return std::isfinite(v) && v == std::nearbyint(v); }

}  // namespace

double evaluate(const Expression& e, double x) {
  switch (e.op()) {
    case Op::Const:
      return e.value();
    case Op::Var:
      return x;
    case Op::Neg:
      return -evaluate(e.lhs(), x);
    case Op::Add:
      return evaluate(e.lhs(), x) + evaluate(e.rhs(), x);
    case Op::Sub:
      return evaluate(e.lhs(), x) - evaluate(e.rhs(), x);
    case Op::Mul:
      return evaluate(e.lhs(), x) * evaluate(e.rhs(), x);
    case Op::Div: {
      const double den = evaluate(e.rhs(), x);
      if (den == 0.0) domain_fail(e, "division by zero");
      return evaluate(e.lhs(), x) / den;
    }
    case Op::Pow: {
      const double base = evaluate(e.lhs(), x);
      const double expo = evaluate(e.rhs(), x);
      if (e.rhs().is_constant()) {
        if (base == 0.0 && expo < 0.0) domain_fail(e, "zero to a negative power");
        if (base < 0.0 && !is_integer(expo)) domain_fail(e, "negative base with non-integer exponent");
        return std::pow(base, expo);
      }
      if (!(base > 0.0)) domain_fail(e, "non-positive base with variable exponent");
      return std::exp(expo * std::log(base));
    }
    case Op::Sin:
      return std::sin(evaluate(e.lhs(), x));
    case Op::Cos:
      return std::cos(evaluate(e.lhs(), x));
    case Op::Tan:
      return std::tan(evaluate(e.lhs(), x));
    case Op::Exp:
      return std::exp(evaluate(e.lhs(), x));
    case Op::Log: {
      const double a = evaluate(e.lhs(), x);
      if (!(a > 0.0)) domain_fail(e, "log of non-positive value");
      return std::log(a);
    }
    case Op::Sinh:
      return std::sinh(evaluate(e.lhs(), x));
    case Op::Cosh:
      return std::cosh(evaluate(e.lhs(), x));
    case Op::Tanh:
      return std::tanh(evaluate(e.lhs(), x));
    case Op::Sqrt: {
      const double a = evaluate(e.lhs(), x);
      if (a < 0.0) domain_fail(e, "sqrt of negative value");
      return std::sqrt(a);
    }
  }
  throw Error("corrupt expression node");
}

// ---------------------------------------------------------------------------
// Simplification

namespace {

Expression make_neg(const Expression& a) {
  if (a.op() == Op::Neg) return a.lhs();
  if (a.op() == Op::Const) return Expression::constant(-a.value());
  return -a;
}

Expression rebuild(const Expression& e, const Expression& l, const Expression& r) {
  if (e.op() == Op::Neg || is_unary_function(e.op())) return Expression::unary(e.op(), l);
  return Expression::binary(e.op(), l, r);
}

Expression simplify_node(const Expression& e) {
  if (e.op() == Op::Const || e.op() == Op::Var) return e;

  const Expression l = simplify_node(e.lhs());
  const Expression r = is_binary(e.op()) ? simplify_node(e.rhs()) : Expression();
  const Expression node = rebuild(e, l, r);

  if (node.is_constant()) {
    try {
      const double v = evaluate(node, 0.0);
      if (std::isfinite(v)) return Expression::constant(v);
    } catch (const DomainError&) {
      // leave unfolded; evaluation will report the error where it matters
    }
  }

  switch (e.op()) {
    case Op::Neg:
      return make_neg(l);
    case Op::Add:
      if (l.is_const_value(0.0)) return r;
      if (r.is_const_value(0.0)) return l;
      break;
    case Op::Sub:
      if (r.is_const_value(0.0)) return l;
      if (l.is_const_value(0.0)) return make_neg(r);
      break;
    case Op::Mul:
      if (l.is_const_value(0.0) || r.is_const_value(0.0)) return Expression::constant(0.0);
      if (l.is_const_value(1.0)) return r;
      if (r.is_const_value(1.0)) return l;
      break;
    case Op::Div:
      if (r.is_const_value(1.0)) return l;
      if (l.is_const_value(0.0)) return Expression::constant(0.0);
      break;
    case Op::Pow:
      if (r.is_const_value(1.0)) return l;
      if (r.is_const_value(0.0)) return Expression::constant(1.0);
      break;
    default:
      break;
  }
  return node;
}

Expression derivative(const Expression& e) {
  const Expression& u = e.lhs();
  switch (e.op()) {
    case Op::Const:
      return Expression::constant(0.0);
    case Op::Var:
      return Expression::constant(1.0);
    case Op::Neg:
      return -derivative(u);
    case Op::Add:
      return derivative(u) + derivative(e.rhs());
    case Op::Sub:
      return derivative(u) - derivative(e.rhs());
    case Op::Mul:
      return derivative(u) * e.rhs() + u * derivative(e.rhs());
    case Op::Div: {
      const Expression& v = e.rhs();
      return (derivative(u) * v - u * derivative(v)) / pow(v, 2.0);
    }
    case Op::Pow: {
      const Expression& v = e.rhs();
      if (v.is_constant()) {
        const Expression reduced =
            v.op() == Op::Const ? Expression::constant(v.value() - 1.0) : v - 1.0;
        return v * pow(u, reduced) * derivative(u);
      }
      return e * (derivative(v) * log(u) + v * derivative(u) / u);
    }
    case Op::Sin:
      return cos(u) * derivative(u);
    case Op::Cos:
      return -(sin(u) * derivative(u));
    case Op::Tan:
      return derivative(u) / pow(cos(u), 2.0);
    case Op::Exp:
      return e * derivative(u);
    case Op::Log:
      return derivative(u) / u;
    case Op::Sinh:
      return cosh(u) * derivative(u);
    case Op::Cosh:
      return sinh(u) * derivative(u);
    case Op::Tanh:
      return derivative(u) * (1.0 - pow(e, 2.0));
    case Op::Sqrt:
      return derivative(u) / (2.0 * e);
  }
  throw Error("corrupt expression node");
}

}  // namespace

Expression simplify(const Expression& e) { return simplify_node(e); }

Expression differentiate(const Expression& e, int order) {
  if (order < 1) throw Error("derivative order must be >= 1");
  Expression d = simplify(e);
  for (int i = 0; i < order; ++i) d = simplify(derivative(d));
  return d;
}

}  // namespace lienard
