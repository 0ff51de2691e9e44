#pragma once

#include <Eigen/Core>

#include "opdiff/expr.hpp"
#include "opdiff/quadrature.hpp"

namespace opdiff {

/// Index pair (a, b) of the basis function gen_binom(a, b)·x^b (1 − x)^{a−b}.
/// The integer case is a = n, b = k with 0 <= k <= n.
struct BasisIndex {
  double degree;
  double index;
};

/// p_{a,b}(x). Uses the exact binomial for integer degree <= 30 and log space
/// otherwise; endpoint values follow the limits of the power factors.
double basis(const BasisIndex& idx, double x);
inline double basis(int n, int k, double x) { return basis(BasisIndex{double(n), double(k)}, x); }

/// (p_{n,0}(x), …, p_{n,n}(x)).
Eigen::VectorXd basis_row(int n, double x);

/// Polynomial Σ_k c_k p_{n,k}(x) of degree n in Bernstein form.
///
/// Every operator image in this library is such a polynomial, so coefficient
/// vectors are built once and evaluated on whole grids.
class BernsteinPoly {
 public:
  BernsteinPoly() = default;
  explicit BernsteinPoly(Eigen::VectorXd coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }

  double operator()(double x) const;
  Eigen::VectorXd operator()(const Eigen::VectorXd& xs) const;

  /// r-th derivative: n(n−1)…(n−r+1) Δ^r c in Bernstein form of degree n − r.
  BernsteinPoly derivative(int r) const;

  BernsteinPoly operator*(double s) const { return BernsteinPoly(coeffs_ * s); }

 private:
  Eigen::VectorXd coeffs_;
  Eigen::VectorXd log_binom_;  // ln C(n, k); used for n > 30
};

/// Forward differences Δ_h^r of equispaced samples: entry i holds
/// Δ_h^r f(x_i) for i = 0 … size − 1 − r.
struct DiffTable {
  double step;
  int order;
  Eigen::VectorXd values;
};

/// r in-place difference passes over the samples.
DiffTable forward_differences(const Eigen::VectorXd& samples, double step, int r);

/// Δ_h^r f(x0) by the alternating binomial sum.
double forward_diff(const RealFn& f, double x0, double h, int r);

/// Equispaced divided difference [x0, x0 + h, …, x0 + r h; f].
double divided_diff(const RealFn& f, double x0, double h, int r);

/// Samples f(i/n), i = 0 … n.
Eigen::VectorXd uniform_samples(const RealFn& f, int n);

BernsteinPoly bernstein_poly(const RealFn& f, int n);
double bernstein_eval(const RealFn& f, int n, double x);

/// (B_n f)^{(r)} = n(n−1)…(n−r+1) Σ_{i=0}^{n−r} p_{n−r,i}(x) Δ_{1/n}^r f(i/n).
BernsteinPoly bernstein_deriv_poly(const RealFn& f, int n, int r);
double bernstein_deriv(const RealFn& f, int n, int r, double x);

/// n^k (n − k)! / n!, the normalization of Q_n^k.
double q_op_prefactor(int n, int k);

/// (Q_n^k f)^{(r)} = q_op_prefactor(n, k)·(B_n F)^{(k+r)} for an order-k
/// antiderivative F of f.
BernsteinPoly q_op_poly(const RealFn& antiderivative, int n, int k, int r = 0);
double q_op_eval(const RealFn& f, int n, int k, double x, const Antiderivative& F);

/// ∫_0^1 p_{a,b}(t) φ(t) dt by the m-point Gauss rule for the weight
/// t^b (1 − t)^{a−b}; exact for polynomial φ of degree <= 2m − 1.
double generalized_basis_integral(double a, double b, const RealFn& phi, int m);

}  // namespace opdiff
