#pragma once

#include <Eigen/Core>
#include <cmath>

#include "opdiff/expr.hpp"

namespace opdiff {

enum class WeightKind {
  Legendre,  // w(t) = 1
  Jacobi,    // w(t) = t^alpha (1 − t)^beta
};

/// Quadrature rule on [0, 1]: Σ weights[i]·f(nodes[i]) ≈ ∫ w(t) f(t) dt.
struct QuadRule {
  WeightKind kind = WeightKind::Legendre;
  double alpha = 0.0;
  double beta = 0.0;
  Eigen::VectorXd nodes;
  Eigen::VectorXd complements;  // 1 − nodes, computed without cancellation
  Eigen::VectorXd weights;

  Eigen::Index count() const { return nodes.size(); }

  /// ∫_0^1 w(t) dt.
  double mass() const;
};

/// m-point Gauss rule for the given weight built by Golub–Welsch; cached
/// process-wide, so the reference stays valid for the life of the program.
const QuadRule& gauss_rule(WeightKind kind, int m, double alpha = 0.0, double beta = 0.0);
inline const QuadRule& legendre_rule(int m) { return gauss_rule(WeightKind::Legendre, m); }
inline const QuadRule& jacobi_rule(int m, double alpha, double beta) {
  return gauss_rule(WeightKind::Jacobi, m, alpha, beta);
}

/// Uncached construction, used by gauss_rule.
QuadRule build_gauss_rule(WeightKind kind, int m, double alpha = 0.0, double beta = 0.0);

template <typename F>
double integrate(const F& f, const QuadRule& rule) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < rule.count(); ++i) s += rule.weights(i) * f(rule.nodes(i));
  return s;
}

/// ∫_a^b f by the m-point Gauss–Legendre rule mapped to [a, b].
template <typename F>
double panel_integral(const F& f, double a, double b, int m = 16) {
  const QuadRule& rule = legendre_rule(m);
  const double h = b - a;
  double s = 0.0;
  for (Eigen::Index i = 0; i < rule.count(); ++i) s += rule.weights(i) * f(a + h * rule.nodes(i));
  return h * s;
}

/// Order-k antiderivative F of f with F^{(j)}(0) = 0 for j < k.
///
/// Values of F, F′, …, F^{(k−1)} are cached at uniform breakpoints. A point
/// value expands F around the nearest breakpoint b by Taylor's formula with
/// integral remainder, the remainder ∫_b^x (x − t)^{k−1}/(k−1)! f(t) dt
/// taken by 16-point Gauss–Legendre.
class Antiderivative {
 public:
  Antiderivative(RealFn f, int order, int panels = 256);

  int order() const { return order_; }
  int panels() const { return panels_; }

  double operator()(double x) const { return value(order_, x); }

  /// The order-j antiderivative of f, 1 <= j <= order; F^{(k−j)} in terms of F.
  double value(int j, double x) const;

 private:
  RealFn f_;
  int order_;
  int panels_;
  double h_;
  Eigen::MatrixXd table_;  // table_(i, j − 1) = order-j antiderivative at i·h
};

Antiderivative antiderivative(const SmoothFn& f, int k, int panels = 256);

}  // namespace opdiff
