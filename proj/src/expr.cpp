#include "opdiff/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "opdiff/errors.hpp"

namespace opdiff {

struct Expr::Node {
  NodeKind kind;
  double value = 0.0;
  int exponent = 0;
  std::vector<Expr> args;
};

namespace {

bool is_unary(NodeKind k) {
  switch (k) {
    case NodeKind::Neg:
    case NodeKind::Sin:
    case NodeKind::Cos:
    case NodeKind::Exp:
    case NodeKind::Ln:
    case NodeKind::Sqrt:
    case NodeKind::Pow:
      return true;
    default:
      return false;
  }
}

bool is_binary(NodeKind k) {
  return k == NodeKind::Add || k == NodeKind::Sub || k == NodeKind::Mul || k == NodeKind::Div;
}

const char* function_name(NodeKind k) {
  switch (k) {
    case NodeKind::Sin: return "sin";
    case NodeKind::Cos: return "cos";
    case NodeKind::Exp: return "exp";
    case NodeKind::Ln: return "ln";
    case NodeKind::Sqrt: return "sqrt";
    default: return nullptr;
  }
}

}  // namespace

Expr::Expr() {
  static const std::shared_ptr<const Node> zero = [] {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Constant;
    return n;
  }();
  node_ = zero;
}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable() {
  static const Expr x = [] {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Variable;
    return Expr(std::move(n));
  }();
  return x;
}

Expr Expr::pi() {
  static const Expr p = [] {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Pi;
    return Expr(std::move(n));
  }();
  return p;
}

Expr Expr::unary(NodeKind kind, Expr arg) {
  if (!is_unary(kind) || kind == NodeKind::Pow) {
    throw std::invalid_argument("Expr::unary: not a unary node kind");
  }
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = {std::move(arg)};
  return Expr(std::move(n));
}

Expr Expr::binary(NodeKind kind, Expr lhs, Expr rhs) {
  if (!is_binary(kind)) throw std::invalid_argument("Expr::binary: not a binary node kind");
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = {std::move(lhs), std::move(rhs)};
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
  if (exponent < 0) throw std::invalid_argument("Expr::power: negative exponent");
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Pow;
  n->exponent = exponent;
  n->args = {std::move(base)};
  return Expr(std::move(n));
}

NodeKind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
int Expr::exponent() const { return node_->exponent; }
const Expr& Expr::arg(std::size_t i) const { return node_->args.at(i); }
std::size_t Expr::arity() const { return node_->args.size(); }

bool Expr::is_constant(double v) const {
  return node_->kind == NodeKind::Constant && node_->value == v;
}

double Expr::operator()(double x) const { return eval(*this, x); }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& p = *a.node_;
  const auto& q = *b.node_;
  if (p.kind != q.kind || p.args.size() != q.args.size()) return false;
  if (p.kind == NodeKind::Constant) return p.value == q.value;
  if (p.kind == NodeKind::Pow && p.exponent != q.exponent) return false;
  for (std::size_t i = 0; i < p.args.size(); ++i) {
    if (!(p.args[i] == q.args[i])) return false;
  }
  return true;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(NodeKind::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(NodeKind::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(NodeKind::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(NodeKind::Div, a, b); }
Expr operator-(const Expr& a) { return Expr::unary(NodeKind::Neg, a); }

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr run() {
    skip_ws();
    if (pos_ >= src_.size()) fail("empty expression", {"number", "x", "pi", "function", "(", "-"});
    Expr e = sum();
    skip_ws();
    if (pos_ < src_.size()) fail("unexpected trailing input", {"+", "-", "*", "/", "^", "end of input"});
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) const {
    std::string what = "parse error at offset " + std::to_string(pos_) + ": " + msg;
    if (!expected.empty()) {
      what += "; expected one of:";
      for (const auto& e : expected) what += " '" + e + "'";
    }
    throw ParseError(what, pos_, std::move(expected));
  }

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                  src_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr sum() {
    Expr lhs = product();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + product();
      } else if (accept('-')) {
        lhs = lhs - product();
      } else {
        return lhs;
      }
    }
  }

  Expr product() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        lhs = lhs / unary();
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    while (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (start == pos_) {
        fail("exponent must be a non-negative integer literal", {"integer"});
      }
      int exponent = 0;
      auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, exponent);
      if (ec != std::errc()) {
        pos_ = start;
        fail("exponent out of range", {"integer"});
      }
      (void)ptr;
      base = Expr::power(base, exponent);
    }
    return base;
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input", {"number", "x", "pi", "function", "("});
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = sum();
      if (!accept(')')) fail("unbalanced parenthesis", {")"});
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("unexpected character '") + c + "'", {"number", "x", "pi", "function", "("});
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
        pos_ = p;
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || ptr != src_.data() + pos_) {
      pos_ = start;
      fail("malformed number", {"number"});
    }
    return Expr::constant(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "x") return Expr::variable();
    if (name == "pi") return Expr::pi();

    NodeKind kind;
    if (name == "sin") {
      kind = NodeKind::Sin;
    } else if (name == "cos") {
      kind = NodeKind::Cos;
    } else if (name == "exp") {
      kind = NodeKind::Exp;
    } else if (name == "ln") {
      kind = NodeKind::Ln;
    } else if (name == "sqrt") {
      kind = NodeKind::Sqrt;
    } else {
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'", {"x", "pi", "sin", "cos", "exp", "ln", "sqrt"});
    }
    if (!accept('(')) fail("function call needs '('", {"("});
    Expr arg = sum();
    if (!accept(')')) fail("unbalanced parenthesis", {")"});
    return Expr::unary(kind, std::move(arg));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view src) { return Parser(src).run(); }

std::string unparse(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Constant: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", e.value());
      if (e.value() < 0 || std::signbit(e.value())) return std::string("(") + buf + ")";
      return buf;
    }
    case NodeKind::Variable: return "x";
    case NodeKind::Pi: return "pi";
    case NodeKind::Neg: return "(-" + unparse(e.arg(0)) + ")";
    case NodeKind::Pow: return "(" + unparse(e.arg(0)) + "^" + std::to_string(e.exponent()) + ")";
    case NodeKind::Add: return "(" + unparse(e.arg(0)) + " + " + unparse(e.arg(1)) + ")";
    case NodeKind::Sub: return "(" + unparse(e.arg(0)) + " - " + unparse(e.arg(1)) + ")";
    case NodeKind::Mul: return "(" + unparse(e.arg(0)) + "*" + unparse(e.arg(1)) + ")";
    case NodeKind::Div: return "(" + unparse(e.arg(0)) + "/" + unparse(e.arg(1)) + ")";
    default: return std::string(function_name(e.kind())) + "(" + unparse(e.arg(0)) + ")";
  }
}

// ---------------------------------------------------------------------------
// Evaluation

double eval(const Expr& e, double x) {
  switch (e.kind()) {
    case NodeKind::Constant: return e.value();
    case NodeKind::Variable: return x;
    case NodeKind::Pi: return std::numbers::pi;
    case NodeKind::Neg: return -eval(e.arg(0), x);
    case NodeKind::Sin: return std::sin(eval(e.arg(0), x));
    case NodeKind::Cos: return std::cos(eval(e.arg(0), x));
    case NodeKind::Exp: return std::exp(eval(e.arg(0), x));
    case NodeKind::Ln: {
      const double t = eval(e.arg(0), x);
      if (!(t > 0)) {
        throw DomainError("ln of non-positive value " + std::to_string(t) + " in " + unparse(e) +
                          " at x = " + std::to_string(x));
      }
      return std::log(t);
    }
    case NodeKind::Sqrt: {
      const double t = eval(e.arg(0), x);
      if (t < 0) {
        throw DomainError("sqrt of negative value " + std::to_string(t) + " in " + unparse(e) +
                          " at x = " + std::to_string(x));
      }
      return std::sqrt(t);
    }
    case NodeKind::Pow: {
      const double b = eval(e.arg(0), x);
      double r = 1.0;
      for (int i = 0; i < e.exponent(); ++i) r *= b;
      return r;
    }
    case NodeKind::Add: return eval(e.arg(0), x) + eval(e.arg(1), x);
    case NodeKind::Sub: return eval(e.arg(0), x) - eval(e.arg(1), x);
    case NodeKind::Mul: return eval(e.arg(0), x) * eval(e.arg(1), x);
    case NodeKind::Div: {
      const double d = eval(e.arg(1), x);
      if (d == 0.0) {
        throw DomainError("division by zero in " + unparse(e) + " at x = " + std::to_string(x));
      }
      return eval(e.arg(0), x) / d;
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Simplification and differentiation

namespace {

bool depends_on_x(const Expr& e) {
  if (e.kind() == NodeKind::Variable) return true;
  for (std::size_t i = 0; i < e.arity(); ++i) {
    if (depends_on_x(e.arg(i))) return true;
  }
  return false;
}

bool is_number(const Expr& e) { return e.kind() == NodeKind::Constant; }

Expr simplify_node(const Expr& e) {
  using K = NodeKind;
  switch (e.kind()) {
    case K::Constant:
    case K::Variable:
    case K::Pi:
      return e;
    case K::Neg: {
      const Expr a = e.arg(0);
      if (is_number(a)) return Expr::constant(-a.value());
      if (a.kind() == K::Neg) return a.arg(0);
      return e;
    }
    case K::Sin:
    case K::Cos:
    case K::Exp:
    case K::Ln:
    case K::Sqrt: {
      const Expr& a = e.arg(0);
      if (!is_number(a)) return e;
      const double v = a.value();
      if (e.kind() == K::Sin) return Expr::constant(std::sin(v));
      if (e.kind() == K::Cos) return Expr::constant(std::cos(v));
      if (e.kind() == K::Exp) return Expr::constant(std::exp(v));
      if (e.kind() == K::Ln && v > 0) return Expr::constant(std::log(v));
      if (e.kind() == K::Sqrt && v >= 0) return Expr::constant(std::sqrt(v));
      return e;  // leave domain errors for evaluation time
    }
    case K::Pow: {
      const Expr& a = e.arg(0);
      if (e.exponent() == 0) return Expr::constant(1.0);
      if (e.exponent() == 1) return a;
      if (is_number(a)) return Expr::constant(eval(e, 0.0));
      return e;
    }
    case K::Add: {
      const Expr& a = e.arg(0);
      const Expr& b = e.arg(1);
      if (is_number(a) && is_number(b)) return Expr::constant(a.value() + b.value());
      if (a.is_constant(0.0)) return b;
      if (b.is_constant(0.0)) return a;
      return e;
    }
    case K::Sub: {
      const Expr& a = e.arg(0);
      const Expr& b = e.arg(1);
      if (is_number(a) && is_number(b)) return Expr::constant(a.value() - b.value());
      if (b.is_constant(0.0)) return a;
      if (a.is_constant(0.0)) return simplify_node(-b);
      return e;
    }
    case K::Mul: {
      const Expr& a = e.arg(0);
      const Expr& b = e.arg(1);
      if (is_number(a) && is_number(b)) return Expr::constant(a.value() * b.value());
      if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
      if (a.is_constant(1.0)) return b;
      if (b.is_constant(1.0)) return a;
      return e;
    }
    case K::Div: {
      const Expr& a = e.arg(0);
      const Expr& b = e.arg(1);
      if (b.is_constant(0.0)) return e;
      if (is_number(a) && is_number(b)) return Expr::constant(a.value() / b.value());
      if (a.is_constant(0.0)) return Expr::constant(0.0);
      if (b.is_constant(1.0)) return a;
      return e;
    }
  }
  return e;
}

Expr rebuild(const Expr& e, std::array<Expr, 2> args) {
  switch (e.kind()) {
    case NodeKind::Pow: return Expr::power(args[0], e.exponent());
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::Div: return Expr::binary(e.kind(), args[0], args[1]);
    default: return Expr::unary(e.kind(), args[0]);
  }
}

Expr derive(const Expr& e) {
  using K = NodeKind;
  if (!depends_on_x(e)) return Expr::constant(0.0);
  auto S = [](const Expr& t) { return simplify_node(t); };
  switch (e.kind()) {
    case K::Variable: return Expr::constant(1.0);
    case K::Neg: return S(-derive(e.arg(0)));
    case K::Sin: {
      const Expr& u = e.arg(0);
      return S(derive(u) * Expr::unary(K::Cos, u));
    }
    case K::Cos: {
      const Expr& u = e.arg(0);
      return S(-S(derive(u) * Expr::unary(K::Sin, u)));
    }
    case K::Exp: return S(derive(e.arg(0)) * e);
    case K::Ln: return S(derive(e.arg(0)) / e.arg(0));
    case K::Sqrt: return S(derive(e.arg(0)) / (Expr::constant(2.0) * e));
    case K::Pow: {
      const Expr& u = e.arg(0);
      const int n = e.exponent();
      const Expr lowered = S(Expr::power(u, n - 1));
      return S(S(Expr::constant(n) * lowered) * derive(u));
    }
    case K::Add: return S(derive(e.arg(0)) + derive(e.arg(1)));
    case K::Sub: return S(derive(e.arg(0)) - derive(e.arg(1)));
    case K::Mul: {
      const Expr& u = e.arg(0);
      const Expr& v = e.arg(1);
      return S(S(derive(u) * v) + S(u * derive(v)));
    }
    case K::Div: {
      const Expr& u = e.arg(0);
      const Expr& v = e.arg(1);
      const Expr num = S(S(derive(u) * v) - S(u * derive(v)));
      return S(num / Expr::power(v, 2));
    }
    default: return Expr::constant(0.0);
  }
}

}  // namespace

Expr simplify(const Expr& e) {
  if (e.arity() == 0) return e;
  std::array<Expr, 2> args{};
  for (std::size_t i = 0; i < e.arity(); ++i) args[i] = simplify(e.arg(i));
  return simplify_node(rebuild(e, args));
}

Expr differentiate(const Expr& e) { return derive(simplify(e)); }

// ---------------------------------------------------------------------------

SmoothFn::SmoothFn(const Expr& base, int max_order) {
  if (max_order < 0) throw ParameterError("smooth_fn: max_order must be >= 0");
  derivs_.reserve(static_cast<std::size_t>(max_order) + 1);
  derivs_.push_back(simplify(base));
  for (int j = 1; j <= max_order; ++j) derivs_.push_back(differentiate(derivs_.back()));
}

const Expr& SmoothFn::deriv(int order) const {
  if (order < 0 || order > max_order()) {
    throw ParameterError("SmoothFn: derivative of order " + std::to_string(order) +
                         " not available (max_order = " + std::to_string(max_order()) + ")");
  }
  return derivs_[static_cast<std::size_t>(order)];
}

double SmoothFn::eval(int order, double x) const { return opdiff::eval(deriv(order), x); }

RealFn SmoothFn::fn(int order) const {
  return [e = deriv(order)](double x) { return opdiff::eval(e, x); };
}

SmoothFn smooth_fn(const Expr& e, int max_order) { return SmoothFn(e, max_order); }

}  // namespace opdiff
