#include "opdiff/bernstein.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "opdiff/errors.hpp"
#include "opdiff/special.hpp"

namespace opdiff {

namespace {

constexpr double kGridSlack = 1e-12;

bool use_exact_path(double a, double b) {
  return detail::is_small_integer(a, detail::kExactBinomialLimit) &&
         detail::is_small_integer(b, detail::kExactBinomialLimit) && b <= a;
}

double int_pow(double x, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

Eigen::VectorXd log_binomials(int n) {
  Eigen::VectorXd lb(n + 1);
  const double lgn = std::lgamma(n + 1.0);
  for (int k = 0; k <= n; ++k) lb(k) = lgn - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return lb;
}

void check_unit(double x, const char* who) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError(std::string(who) + ": x = " + std::to_string(x) + " outside [0, 1]");
  }
}

}  // namespace

double basis(const BasisIndex& idx, double x) {
  const double a = idx.degree;
  const double b = idx.index;
  if (!(b + 1 > 0) || !(a - b + 1 > 0)) {
    throw DomainError("basis: index (" + std::to_string(a) + ", " + std::to_string(b) + ") out of range");
  }
  check_unit(x, "basis");
  const double c = a - b;
  if (x == 0.0) {
    if (b == 0.0) return 1.0;
    if (b > 0.0) return 0.0;
    throw DomainError("basis: negative exponent of x at x = 0");
  }
  if (x == 1.0) {
    if (c == 0.0) return 1.0;
    if (c > 0.0) return 0.0;
    throw DomainError("basis: negative exponent of 1 - x at x = 1");
  }
  if (use_exact_path(a, b)) {
    return double(binomial_exact(int(a), int(b))) * int_pow(x, int(b)) * int_pow(1.0 - x, int(c));
  }
  return std::exp(log_gen_binom(a, b) + b * std::log(x) + c * std::log1p(-x));
}

Eigen::VectorXd basis_row(int n, double x) {
  check_unit(x, "basis_row");
  Eigen::VectorXd row = Eigen::VectorXd::Zero(n + 1);
  if (x == 0.0) {
    row(0) = 1.0;
    return row;
  }
  if (x == 1.0) {
    row(n) = 1.0;
    return row;
  }
  if (n <= detail::kExactBinomialLimit) {
    for (int k = 0; k <= n; ++k) {
      row(k) = double(binomial_exact(n, k)) * int_pow(x, k) * int_pow(1.0 - x, n - k);
    }
    return row;
  }
  const Eigen::VectorXd lb = log_binomials(n);
  const double lx = std::log(x);
  const double l1x = std::log1p(-x);
  for (int k = 0; k <= n; ++k) row(k) = std::exp(lb(k) + k * lx + (n - k) * l1x);
  return row;
}

// ---------------------------------------------------------------------------

BernsteinPoly::BernsteinPoly(Eigen::VectorXd coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() == 0) throw ParameterError("BernsteinPoly: empty coefficient vector");
  if (degree() > detail::kExactBinomialLimit) log_binom_ = log_binomials(degree());
}

double BernsteinPoly::operator()(double x) const {
  const int n = degree();
  if (n <= detail::kExactBinomialLimit || x == 0.0 || x == 1.0) return coeffs_.dot(basis_row(n, x));
  check_unit(x, "BernsteinPoly");
  const double lx = std::log(x);
  const double l1x = std::log1p(-x);
  double s = 0.0;
  for (int k = 0; k <= n; ++k) s += coeffs_(k) * std::exp(log_binom_(k) + k * lx + (n - k) * l1x);
  return s;
}

Eigen::VectorXd BernsteinPoly::operator()(const Eigen::VectorXd& xs) const {
  Eigen::VectorXd out(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) out(i) = (*this)(xs(i));
  return out;
}

BernsteinPoly BernsteinPoly::derivative(int r) const {
  const int n = degree();
  if (r < 0 || r > n) {
    throw ParameterError("BernsteinPoly::derivative: order " + std::to_string(r) + " exceeds degree " +
                         std::to_string(n));
  }
  const DiffTable table = forward_differences(coeffs_, 1.0, r);
  return BernsteinPoly(falling_factorial(double(n), r) * table.values);
}

// ---------------------------------------------------------------------------

DiffTable forward_differences(const Eigen::VectorXd& samples, double step, int r) {
  if (r < 0 || r >= samples.size()) throw ParameterError("forward_differences: order out of range");
  Eigen::VectorXd v = samples;
  Eigen::Index len = v.size();
  for (int pass = 0; pass < r; ++pass) {
    for (Eigen::Index i = 0; i + 1 < len; ++i) v(i) = v(i + 1) - v(i);
    --len;
  }
  return DiffTable{step, r, v.head(len)};
}

double forward_diff(const RealFn& f, double x0, double h, int r) {
  if (!(h > 0)) throw ParameterError("forward_diff: step must be positive");
  if (r < 0) throw ParameterError("forward_diff: negative order");
  if (x0 < -kGridSlack || x0 + r * h > 1.0 + kGridSlack) {
    throw DomainError("forward_diff: samples leave [0, 1] (x0 = " + std::to_string(x0) +
                      ", h = " + std::to_string(h) + ", r = " + std::to_string(r) + ")");
  }
  double s = 0.0;
  for (int j = 0; j <= r; ++j) {
    const double xj = std::clamp(x0 + j * h, 0.0, 1.0);
    const double c = double(binomial_exact(r, j));
    s += ((r - j) % 2 == 0 ? c : -c) * f(xj);
  }
  return s;
}

double divided_diff(const RealFn& f, double x0, double h, int r) {
  double fact = 1.0;
  for (int j = 2; j <= r; ++j) fact *= j;
  return forward_diff(f, x0, h, r) / (fact * std::pow(h, r));
}

Eigen::VectorXd uniform_samples(const RealFn& f, int n) {
  Eigen::VectorXd s(n + 1);
  for (int i = 0; i <= n; ++i) s(i) = f(i == n ? 1.0 : double(i) / n);
  return s;
}

BernsteinPoly bernstein_poly(const RealFn& f, int n) {
  if (n < 1) throw ParameterError("bernstein: n must be >= 1");
  return BernsteinPoly(uniform_samples(f, n));
}

double bernstein_eval(const RealFn& f, int n, double x) {
  check_unit(x, "bernstein_eval");
  return bernstein_poly(f, n)(x);
}

BernsteinPoly bernstein_deriv_poly(const RealFn& f, int n, int r) {
  if (n < 1) throw ParameterError("bernstein: n must be >= 1");
  if (r < 0 || r > n) {
    throw ParameterError("bernstein_deriv: r = " + std::to_string(r) + " must lie in [0, n = " +
                         std::to_string(n) + "]");
  }
  return bernstein_poly(f, n).derivative(r);
}

double bernstein_deriv(const RealFn& f, int n, int r, double x) {
  check_unit(x, "bernstein_deriv");
  return bernstein_deriv_poly(f, n, r)(x);
}

double q_op_prefactor(int n, int k) {
  if (k < 0 || k > n) throw ParameterError("q_op: k must lie in [0, n]");
  return std::exp(k * std::log(double(n)) + std::lgamma(n - k + 1.0) - std::lgamma(n + 1.0));
}

BernsteinPoly q_op_poly(const RealFn& antiderivative, int n, int k, int r) {
  if (k < 1 || k > n) throw ParameterError("q_op: k = " + std::to_string(k) + " must lie in [1, n]");
  if (r < 0 || k + r > n) throw ParameterError("q_op: k + r must not exceed n");
  return bernstein_deriv_poly(antiderivative, n, k + r) * q_op_prefactor(n, k);
}

double q_op_eval(const RealFn& /*f*/, int n, int k, double x, const Antiderivative& F) {
  if (F.order() != k) throw ParameterError("q_op_eval: antiderivative order must equal k");
  check_unit(x, "q_op_eval");
  return q_op_poly([&F](double t) { return F(t); }, n, k)(x);
}

double generalized_basis_integral(double a, double b, const RealFn& phi, int m) {
  const double c = a - b;
  if (!(b > -1) || !(c > -1)) {
    throw DomainError("generalized basis p_{" + std::to_string(a) + "," + std::to_string(b) +
                      "} is not integrable");
  }
  // p_{a,b} is gen_binom(a, b) times the Jacobi weight t^b (1 − t)^c, and
  // its integral is 1/(a + 1); use the normalized rule for that weight.
  const QuadRule& rule = jacobi_rule(m, b, c);
  double s = 0.0;
  for (Eigen::Index i = 0; i < rule.count(); ++i) s += rule.weights(i) * phi(rule.nodes(i));
  return s / (rule.mass() * (a + 1));
}

}  // namespace opdiff
