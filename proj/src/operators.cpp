#include "opdiff/operators.hpp"

#include <cmath>

#include "opdiff/errors.hpp"
#include "opdiff/quadrature.hpp"
#include "opdiff/special.hpp"

namespace opdiff {

void JacobiParams::validate() const {
  if (!(alpha > -1) || !(beta > -1)) {
    throw ParameterError("Jacobi exponents must exceed -1, got (" + std::to_string(alpha) + ", " +
                         std::to_string(beta) + ")");
  }
}

std::string to_string(Family f) {
  switch (f) {
    case Family::Bernstein: return "bernstein";
    case Family::Kantorovich: return "kantorovich";
    case Family::QOp: return "qop";
    case Family::Durrmeyer: return "durrmeyer";
    case Family::Genuine: return "genuine";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "bernstein") return Family::Bernstein;
  if (name == "kantorovich") return Family::Kantorovich;
  if (name == "qop" || name == "q_op") return Family::QOp;
  if (name == "durrmeyer") return Family::Durrmeyer;
  if (name == "genuine") return Family::Genuine;
  throw ParameterError("unknown operator family '" + name + "'");
}

void OperatorSpec::validate() const {
  const std::string who = to_string(family) + ": ";
  if (n < 1) throw ParameterError(who + "n must be >= 1");
  if (r < 0 || r > n) throw ParameterError(who + "r must lie in [0, n]");
  switch (family) {
    case Family::QOp:
      if (k < 1 || k + r > n) throw ParameterError(who + "requires k >= 1 and k + r <= n");
      break;
    case Family::Durrmeyer:
      jacobi.validate();
      break;
    case Family::Genuine:
      if (n < 2) throw ParameterError(who + "n must be >= 2");
      if (r > n - 2) throw ParameterError(who + "r must lie in [0, n - 2]");
      break;
    default:
      break;
  }
}

int QuadOptions::jacobi_nodes(int n, const JacobiParams& p) const {
  const int m = nodes(n);
  return (p.alpha <= -0.9 || p.beta <= -0.9) ? 4 * m : m;
}

namespace {

void check_unit(double x, const char* who) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(who) + ": x outside [0, 1]");
}

double log_rising(double x, int len) { return std::lgamma(x + len) - std::lgamma(x); }

}  // namespace

// Kantorovich ---------------------------------------------------------------

BernsteinPoly kantorovich_poly(const RealFn& f, int n, int r) {
  if (n < 1) throw ParameterError("kantorovich: n must be >= 1");
  if (r < 0 || r > n) throw ParameterError("kantorovich: r must lie in [0, n]");
  Eigen::VectorXd g(n + 1);
  const double h = 1.0 / (n + 1);
  for (int i = 0; i <= n; ++i) g(i) = panel_integral(f, i * h, i == n ? 1.0 : (i + 1) * h, 16);
  return BernsteinPoly((n + 1) * g).derivative(r);
}

double kantorovich_eval(const RealFn& f, int n, double x) {
  check_unit(x, "kantorovich_eval");
  return kantorovich_poly(f, n)(x);
}

double kantorovich_deriv(const RealFn& f, int n, int r, double x) {
  check_unit(x, "kantorovich_deriv");
  return kantorovich_poly(f, n, r)(x);
}

// Durrmeyer -------------------------------------------------------------------

double durrmeyer_c(int n, int k, const JacobiParams& p) {
  p.validate();
  if (k < 0 || k > n) throw ParameterError("durrmeyer_c: k must lie in [0, n]");
  return std::exp(log_gen_binom(double(n), double(k)) + log_beta(k + p.alpha + 1, n - k + p.beta + 1));
}

BernsteinPoly durrmeyer_poly(const RealFn& f, int n, const JacobiParams& p, const QuadOptions& q) {
  p.validate();
  if (n < 0) throw ParameterError("durrmeyer: n must be >= 0");
  const QuadRule& rule = jacobi_rule(q.jacobi_nodes(n, p), p.alpha, p.beta);
  const Eigen::Index m = rule.count();

  Eigen::VectorXd fw(m), lt(m), lc(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    fw(i) = rule.weights(i) * f(rule.nodes(i));
    lt(i) = std::log(rule.nodes(i));
    lc(i) = std::log(rule.complements(i));
  }
  // p_{n,k}(t)/c_{n,k} = t^k (1 − t)^{n−k} / B(k + α + 1, n − k + β + 1).
  Eigen::MatrixXd kernel(m, n + 1);
  for (int k = 0; k <= n; ++k) {
    const double lb = log_beta(k + p.alpha + 1, n - k + p.beta + 1);
    kernel.col(k) = (k * lt.array() + (n - k) * lc.array() - lb).exp();
  }
  return BernsteinPoly(kernel.transpose() * fw);
}

double durrmeyer_eval(const RealFn& f, int n, const JacobiParams& p, double x, const QuadOptions& q) {
  check_unit(x, "durrmeyer_eval");
  if (n < 1) throw ParameterError("durrmeyer: n must be >= 1");
  return durrmeyer_poly(f, n, p, q)(x);
}

double abel_prefactor(int n, int r, const JacobiParams& p) {
  const double s = n + p.alpha + p.beta + 2;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(n - r + 1.0) - log_rising(s, r));
}

double durrmeyer_scale(int n, int r, const JacobiParams& p) { return 1.0 / abel_prefactor(n, r, p); }

BernsteinPoly durrmeyer_deriv_poly(const SmoothFn& f, int n, int r, const JacobiParams& p, const QuadOptions& q) {
  p.validate();
  if (r < 0 || r > n) throw ParameterError("durrmeyer_deriv: r must lie in [0, n]");
  if (r == 0) return durrmeyer_poly(f.fn(0), n, p, q);
  const JacobiParams shifted{p.alpha + r, p.beta + r};
  return durrmeyer_poly(f.fn(r), n - r, shifted, q) * abel_prefactor(n, r, p);
}

double durrmeyer_deriv(const SmoothFn& f, int n, int r, const JacobiParams& p, double x, const QuadOptions& q) {
  check_unit(x, "durrmeyer_deriv");
  return durrmeyer_deriv_poly(f, n, r, p, q)(x);
}

BernsteinPoly durrmeyer_deriv_poly_generalized(const SmoothFn& f, int n, int r, const JacobiParams& p,
                                               const QuadOptions& q) {
  p.validate();
  if (r < 0 || r > n) throw ParameterError("durrmeyer_deriv: r must lie in [0, n]");
  const double ab = p.alpha + p.beta;
  const double gamma_ratio = std::exp(std::lgamma(n + ab + 2) + std::lgamma(n + 1.0) -
                                      std::lgamma(n + ab + r + 1) - std::lgamma(n - r + 1.0));
  const RealFn g = f.fn(r);
  const int m = q.nodes(n);
  Eigen::VectorXd c(n - r + 1);
  for (int k = 0; k <= n - r; ++k) {
    c(k) = generalized_basis_integral(n + ab + r, k + p.alpha + r, g, m);
  }
  return BernsteinPoly(gamma_ratio * c);
}

double durrmeyer_moment(int n, int r, const JacobiParams& p, double x, MomentForm form) {
  if (r < 0) throw ParameterError("durrmeyer_moment: r must be >= 0");
  const double s = n + p.alpha + p.beta + 2;
  double sum = 0.0;
  double xk = 1.0;
  for (int k = 0; k <= r; ++k) {
    const double shift = form == MomentForm::Corrected ? p.alpha + k + 1 : p.alpha + r;
    sum += double(binomial_exact(r, k)) * falling_factorial(double(n), k) * rising_factorial(shift, r - k) * xk;
    xk *= x;
  }
  return sum / rising_factorial(s, r);
}

// Functionals -----------------------------------------------------------------

namespace {

void check_functional_range(int n, int r, int k) {
  if (r < 0 || r > n) throw ParameterError("functional: r must lie in [0, n]");
  if (k < 0 || k > n - r) throw ParameterError("functional: k must lie in [0, n - r]");
}

}  // namespace

FunctionalMoments functional_moments(int n, int r, int k, const JacobiParams& p) {
  check_functional_range(n, r, k);
  const double ab = p.alpha + p.beta;
  const double bb = k + p.alpha + r + 1;
  const double bd = n + r + ab + 2;
  const double cb = k + p.alpha + 1;
  const double cd = n - r + ab + 2;
  return FunctionalMoments{1.0, bb / bd, bb * (bb + 1) / (bd * (bd + 1)),
                           1.0, cb / cd, cb * (cb + 1) / (cd * (cd + 1))};
}

double functional_B(const RealFn& phi, int n, int r, int k, const JacobiParams& p, const QuadOptions& q) {
  check_functional_range(n, r, k);
  const double ab = p.alpha + p.beta;
  return (n + ab + r + 1) * generalized_basis_integral(n + ab + r, k + p.alpha + r, phi, q.nodes(n));
}

double functional_C(const RealFn& phi, int n, int r, int k, const JacobiParams& p, const QuadOptions& q) {
  check_functional_range(n, r, k);
  const double ab = p.alpha + p.beta;
  return (n + ab - r + 1) * generalized_basis_integral(n - r + ab, k + p.alpha, phi, q.nodes(n));
}

double functional_A(const RealFn& phi, int n, int r, int k, const JacobiParams& p, const QuadOptions& q) {
  return functional_B(phi, n, r, k, p, q) - functional_C(phi, n, r, k, p, q);
}

FunctionalMoments functional_moments_numeric(int n, int r, int k, const JacobiParams& p, const QuadOptions& q) {
  const RealFn e0 = [](double) { return 1.0; };
  const RealFn e1 = [](double t) { return t; };
  const RealFn e2 = [](double t) { return t * t; };
  return FunctionalMoments{functional_B(e0, n, r, k, p, q), functional_B(e1, n, r, k, p, q),
                           functional_B(e2, n, r, k, p, q), functional_C(e0, n, r, k, p, q),
                           functional_C(e1, n, r, k, p, q), functional_C(e2, n, r, k, p, q)};
}

// Genuine Bernstein–Durrmeyer -------------------------------------------------

namespace {

// Σ_i w_i p_{deg,j}(t_i) g(t_i) for all j, on the Legendre rule with m nodes.
Eigen::VectorXd basis_moments(const RealFn& g, int deg, int m) {
  const QuadRule& rule = legendre_rule(m);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(deg + 1);
  for (Eigen::Index i = 0; i < rule.count(); ++i) {
    acc += (rule.weights(i) * g(rule.nodes(i))) * basis_row(deg, rule.nodes(i));
  }
  return acc;
}

}  // namespace

BernsteinPoly genuine_poly(const RealFn& f, int n, const QuadOptions& q) {
  if (n < 2) throw ParameterError("genuine: n must be >= 2");
  const Eigen::VectorXd mom = basis_moments(f, n - 2, q.nodes(n));
  Eigen::VectorXd c(n + 1);
  c(0) = f(0.0);
  c(n) = f(1.0);
  c.segment(1, n - 1) = (n - 1) * mom;
  return BernsteinPoly(std::move(c));
}

double genuine_eval(const RealFn& f, int n, double x, const QuadOptions& q) {
  check_unit(x, "genuine_eval");
  return genuine_poly(f, n, q)(x);
}

double genuine_scale(int n, int r) {
  // (n+r−1)!(n−r)!/((n−1)! n!) = Π_{i<r} (n+i)/(n−i)
  double s = 1.0;
  for (int i = 0; i < r; ++i) s *= double(n + i) / double(n - i);
  return s;
}

BernsteinPoly genuine_deriv_scaled_poly(const SmoothFn& f, int n, int r, const QuadOptions& q) {
  if (r < 1 || r > n - 2) {
    throw ParameterError("genuine_deriv_scaled: r = " + std::to_string(r) + " must lie in [1, n - 2]");
  }
  const Eigen::VectorXd mom = basis_moments(f.fn(r), n + r - 2, q.nodes(n));
  return BernsteinPoly((n + r - 1) * mom.segment(r - 1, n - r + 1));
}

double genuine_deriv_scaled(const SmoothFn& f, int n, int r, double x, const QuadOptions& q) {
  check_unit(x, "genuine_deriv_scaled");
  return genuine_deriv_scaled_poly(f, n, r, q)(x);
}

BernsteinPoly genuine_deriv_poly(const SmoothFn& f, int n, int r, const QuadOptions& q) {
  if (r == 0) return genuine_poly(f.fn(0), n, q);
  return genuine_deriv_scaled_poly(f, n, r, q) * (1.0 / genuine_scale(n, r));
}

// Dispatch ----------------------------------------------------------------------

BernsteinPoly operator_image(const OperatorSpec& spec, int n, const RealFn& g, const QuadOptions& q) {
  switch (spec.family) {
    case Family::Bernstein: return bernstein_poly(g, n);
    case Family::Kantorovich: return kantorovich_poly(g, n);
    case Family::QOp: {
      const Antiderivative F(g, spec.k);
      return q_op_poly([&F](double t) { return F(t); }, n, spec.k);
    }
    case Family::Durrmeyer: return durrmeyer_poly(g, n, spec.jacobi, q);
    case Family::Genuine: return genuine_poly(g, n, q);
  }
  throw ParameterError("operator_image: unknown family");
}

BernsteinPoly operator_derivative(const OperatorSpec& spec, const SmoothFn& f, const QuadOptions& q) {
  spec.validate();
  switch (spec.family) {
    case Family::Bernstein: return bernstein_deriv_poly(f.fn(0), spec.n, spec.r);
    case Family::Kantorovich: return kantorovich_poly(f.fn(0), spec.n, spec.r);
    case Family::QOp: {
      const Antiderivative F(f.fn(0), spec.k);
      return q_op_poly([&F](double t) { return F(t); }, spec.n, spec.k, spec.r);
    }
    case Family::Durrmeyer: return durrmeyer_deriv_poly(f, spec.n, spec.r, spec.jacobi, q);
    case Family::Genuine: return genuine_deriv_poly(f, spec.n, spec.r, q);
  }
  throw ParameterError("operator_derivative: unknown family");
}

}  // namespace opdiff
