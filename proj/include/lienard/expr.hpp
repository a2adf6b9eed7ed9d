#pragma once

// Univariate symbolic expressions: parsing, evaluation, exact differentiation
// and shallow simplification.

#include <memory>
#include <string>
#include <string_view>

namespace lienard {

enum class Op {
  Const,
  Var,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Sin,
  Cos,
  Tan,
  Exp,
  Log,
  Sinh,
  Cosh,
  Tanh,
  Sqrt,
};

/// Immutable expression tree over a single real variable. Copies share
/// structure; nodes are never mutated after construction.
class Expression {
 public:
  /// The constant 0.
  Expression();

  static Expression constant(double value);
  static Expression variable(std::string name);
  static Expression unary(Op op, Expression arg);
  static Expression binary(Op op, Expression lhs, Expression rhs);

  Op op() const;
  double value() const;            // Const only
  const std::string& name() const; // Var only
  const Expression& lhs() const;   // unary argument or left operand
  const Expression& rhs() const;   // right operand of a binary node

  bool is_constant() const;  // no variable anywhere in the subtree
  bool is_const_value(double v) const;

  /// Structural equality (constants compared bitwise).
  friend bool operator==(const Expression& a, const Expression& b);

 private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

Expression operator-(const Expression& a);
Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator+(const Expression& a, double b);
Expression operator+(double a, const Expression& b);
Expression operator-(const Expression& a, double b);
Expression operator-(double a, const Expression& b);
Expression operator*(const Expression& a, double b);
Expression operator*(double a, const Expression& b);
Expression operator/(const Expression& a, double b);
Expression operator/(double a, const Expression& b);
Expression pow(const Expression& base, const Expression& exponent);
Expression pow(const Expression& base, double exponent);
Expression sin(const Expression& a);
Expression cos(const Expression& a);
Expression tan(const Expression& a);
Expression exp(const Expression& a);
Expression log(const Expression& a);
Expression sinh(const Expression& a);
Expression cosh(const Expression& a);
Expression tanh(const Expression& a);
Expression sqrt(const Expression& a);

/// Grammar (highest binding first): function call / parentheses, `^`
/// (right-associative), unary minus, `*` `/`, `+` `-`. No implicit
/// multiplication. Throws ParseError / UnknownIdentifierError.
Expression parse(std::string_view text, std::string_view var_name);

/// Throws DomainError naming the offending node.
double evaluate(const Expression& e, double x);

/// Exact derivative of the given order (>= 1), simplified.
Expression differentiate(const Expression& e, int order = 1);

/// Constant folding plus 0/1 identities; value-preserving and idempotent.
Expression simplify(const Expression& e);

/// Fully parenthesised canonical text; constants use 17 significant digits.
std::string to_string(const Expression& e);

const char* op_name(Op op);

}  // namespace lienard
