#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace opdiff {

/// Scalar function of one real variable.
using RealFn = std::function<double(double)>;

enum class NodeKind {
  Constant,
  Variable,
  Pi,
  Neg,
  Sin,
  Cos,
  Exp,
  Ln,
  Sqrt,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
};

/// Immutable expression tree in the variable `x`.
///
/// Nodes are shared between trees, so copying an Expr is cheap and the
/// value can be evaluated concurrently from many threads. Powers carry a
/// non-negative integer exponent; there is no general real power.
class Expr {
 public:
  struct Node;

  Expr();  // the constant 0

  static Expr constant(double value);
  static Expr variable();
  static Expr pi();
  static Expr unary(NodeKind kind, Expr arg);
  static Expr binary(NodeKind kind, Expr lhs, Expr rhs);
  static Expr power(Expr base, int exponent);

  NodeKind kind() const;
  double value() const;  // Constant nodes only
  int exponent() const;  // Pow nodes only
  const Expr& arg(std::size_t i) const;
  std::size_t arity() const;

  bool is_constant(double v) const;

  double operator()(double x) const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

// Arithmetic sugar used by the differentiator and tests; no simplification.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

/// Parses `src`. Grammar, loosest to tightest binding:
///
///     sum     := product (('+' | '-') product)*
///     product := unary (('*' | '/') unary)*
///     unary   := '-' unary | power
///     power   := primary ('^' integer)*
///     primary := number | 'x' | 'pi' | name '(' sum ')' | '(' sum ')'
///
/// with name one of sin, cos, exp, ln, sqrt.
Expr parse(std::string_view src);

/// Text that parses back to a structurally equal tree.
std::string unparse(const Expr& e);

/// Constant folding plus 0/1 identities and double negation.
Expr simplify(const Expr& e);

/// Exact symbolic derivative in x, simplified.
Expr differentiate(const Expr& e);

/// Evaluates at x; throws DomainError naming the failing subtree.
double eval(const Expr& e, double x);

/// A function bundled with its symbolic derivatives 0..max_order.
class SmoothFn {
 public:
  SmoothFn(const Expr& base, int max_order);

  const Expr& base() const { return derivs_.front(); }
  const Expr& deriv(int order) const;
  int max_order() const { return static_cast<int>(derivs_.size()) - 1; }

  double operator()(double x) const { return opdiff::eval(derivs_.front(), x); }
  double eval(int order, double x) const;

  /// Evaluable handle for the derivative of the given order.
  RealFn fn(int order = 0) const;

 private:
  std::vector<Expr> derivs_;
};

SmoothFn smooth_fn(const Expr& e, int max_order);

}  // namespace opdiff
