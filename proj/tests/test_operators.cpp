#include <doctest.h>

#include <cmath>

#include "opdiff/bernstein.hpp"
#include "opdiff/bounds.hpp"
#include "opdiff/errors.hpp"
#include "opdiff/operators.hpp"
#include "opdiff/special.hpp"
#include "oracles.hpp"

using namespace opdiff;

namespace {

const RealFn e0 = [](double) { return 1.0; };
const RealFn e1 = [](double t) { return t; };
const RealFn e2 = [](double t) { return t * t; };

const JacobiParams kPairs[] = {{0, 0}, {0.5, -0.5}, {0.3, -0.2}, {-0.5, 1.5}, {2.0, 0.25}};

double grid_max_abs_diff(const BernsteinPoly& a, const BernsteinPoly& b, int points = 101) {
  const Eigen::VectorXd x = uniform_grid(points);
  return (a(x) - b(x)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("operator spec validation") {
  OperatorSpec s;
  s.n = 5;
  s.r = 6;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s.family = Family::Genuine;
  s.r = 4;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s.r = 3;
  CHECK_NOTHROW(s.validate());
  s.family = Family::QOp;
  s.k = 3;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s.family = Family::Durrmeyer;
  s.jacobi = {-1.0, 0.0};
  CHECK_THROWS_AS(s.validate(), ParameterError);
  CHECK(family_from_string("q_op") == Family::QOp);
  CHECK_THROWS_AS(family_from_string("laplace"), ParameterError);
}

TEST_CASE("Kantorovich examples") {
  for (double t : {0.0, 0.3, 1.0}) CHECK(kantorovich_eval(e0, 7, t) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(kantorovich_eval(e1, 3, 0.0) == doctest::Approx(0.125).epsilon(1e-15));
  for (int n : {1, 4, 25}) {
    for (double t : {0.0, 0.6, 1.0}) {
      CHECK(kantorovich_deriv(e1, n, 1, t) == doctest::Approx(double(n) / (n + 1)).epsilon(1e-13));
      CHECK(kantorovich_eval(e1, n, t) == doctest::Approx((n * t + 0.5) / (n + 1)).epsilon(1e-13));
    }
  }
  CHECK(kantorovich_deriv(e2, 6, 0, 0.4) == doctest::Approx(kantorovich_eval(e2, 6, 0.4)).epsilon(1e-15));
  CHECK_THROWS_AS(kantorovich_deriv(e1, 3, 4, 0.5), ParameterError);
}

TEST_CASE("K_n f equals the derivative of B_{n+1} of an antiderivative") {
  const SmoothFn f = smooth_fn(parse(oracle::example_sources()[1]), 0);
  const Antiderivative F(f.fn(0), 1, 512);
  const RealFn Ff = [&F](double t) { return F(t); };
  for (int n : {10, 20, 50}) {
    const BernsteinPoly k0 = kantorovich_poly(f.fn(0), n);
    const BernsteinPoly viaB = bernstein_deriv_poly(Ff, n + 1, 1);
    CHECK(grid_max_abs_diff(k0, viaB, 501) <= 1e-8);
    for (int r = 1; r <= 2; ++r) {
      CHECK(grid_max_abs_diff(kantorovich_poly(f.fn(0), n, r), bernstein_deriv_poly(Ff, n + 1, r + 1)) <= 1e-7);
    }
  }
}

TEST_CASE("Durrmeyer normalizing constants") {
  for (int n : {1, 6, 40}) {
    for (int k = 0; k <= n; ++k) CHECK(durrmeyer_c(n, k, {0, 0}) == doctest::Approx(1.0 / (n + 1)).epsilon(1e-13));
  }
  CHECK(durrmeyer_c(1, 0, {1, 0}) == doctest::Approx(1.0 / 6).epsilon(1e-14));
  for (const auto& p : kPairs) {
    double s = 0.0;
    for (int k = 0; k <= 12; ++k) s += durrmeyer_c(12, k, p);
    CHECK(s == doctest::Approx(beta(p.alpha + 1, p.beta + 1)).epsilon(1e-12));
    // against an independent quadrature of p_{12,5} w
    const double ref = oracle::tanh_sinh([&](double t, double tc) {
      return double(oracle::pascal(12, 5)) * std::pow(t, 5 + p.alpha) * std::pow(tc, 7 + p.beta);
    });
    CHECK(durrmeyer_c(12, 5, p) == doctest::Approx(ref).epsilon(1e-11));
  }
}

TEST_CASE("Durrmeyer operator examples") {
  for (const auto& p : kPairs) {
    for (double t : {0.0, 0.5, 1.0}) CHECK(durrmeyer_eval(e0, 9, p, t) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(durrmeyer_eval(e1, 4, {0, 0}, 0.0) == doctest::Approx(1.0 / 6).epsilon(1e-13));
  CHECK(durrmeyer_eval(e1, 2, {0.5, -0.5}, 0.0) == doctest::Approx(0.375).epsilon(1e-13));
  for (int i = 0; i <= 10; ++i) {
    const double t = i / 10.0;
    CHECK(durrmeyer_eval(e2, 7, {0, 0}, t) == doctest::Approx(oracle::durrmeyer_e2(7, t)).epsilon(1e-12));
  }
}

TEST_CASE("Durrmeyer against a direct tanh-sinh evaluation of the definition") {
  const JacobiParams p{0.5, -0.5};
  const int n = 6;
  const RealFn g = [](double t) { return std::cos(3 * t); };
  const BernsteinPoly M = durrmeyer_poly(g, n, p);
  for (double x : {0.1, 0.5, 0.85}) {
    double ref = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double num = oracle::tanh_sinh([&](double t, double tc) {
        return std::pow(t, k + p.alpha) * std::pow(tc, n - k + p.beta) * g(t);
      });
      const double den = oracle::tanh_sinh(
          [&](double t, double tc) { return std::pow(t, k + p.alpha) * std::pow(tc, n - k + p.beta); });
      ref += double(oracle::pascal(n, k)) * std::pow(x, k) * std::pow(1 - x, n - k) * num / den;
    }
    CHECK(M(x) == doctest::Approx(ref).epsilon(1e-11));
  }
}

TEST_CASE("Durrmeyer derivative examples") {
  const SmoothFn lin = smooth_fn(parse("x"), 1);
  for (int n : {3, 10, 40}) {
    for (double t : {0.0, 0.25, 1.0}) {
      CHECK(durrmeyer_deriv(lin, n, 1, {0, 0}, t) == doctest::Approx(double(n) / (n + 2)).epsilon(1e-12));
    }
  }
  const SmoothFn f = smooth_fn(parse("exp(x)"), 0);
  CHECK(durrmeyer_deriv(f, 8, 0, {0.5, 0.5}, 0.3) ==
        doctest::Approx(durrmeyer_eval(f.fn(0), 8, {0.5, 0.5}, 0.3)).epsilon(1e-15));
  CHECK_THROWS_AS(durrmeyer_deriv(f, 3, 4, {0, 0}, 0.3), ParameterError);
}

TEST_CASE("Abel identity: both routes to (M_n f)^(r) agree") {
  const SmoothFn f = smooth_fn(parse(oracle::example_sources()[2] + " + sin(3*x)"), 3);
  for (const auto& p : kPairs) {
    for (int n : {5, 20, 30}) {
      for (int r = 1; r <= 3; ++r) {
        const BernsteinPoly a = durrmeyer_deriv_poly(f, n, r, p);
        const BernsteinPoly b = durrmeyer_deriv_poly_generalized(f, n, r, p);
        CHECK(grid_max_abs_diff(a, b) <= 1e-8);
      }
    }
  }
  // and both against differentiating the Bernstein form of M_n f directly
  const JacobiParams p{0.3, -0.2};
  const BernsteinPoly Mn = durrmeyer_poly(f.fn(0), 20, p);
  CHECK(grid_max_abs_diff(Mn.derivative(2), durrmeyer_deriv_poly(f, 20, 2, p)) <= 1e-8);
}

TEST_CASE("moment closed form") {
  for (const auto& p : kPairs) {
    for (double t : {0.0, 0.4, 1.0}) CHECK(durrmeyer_moment(9, 0, p, t) == 1.0);
  }
  for (int i = 0; i <= 10; ++i) {
    const double t = i / 10.0;
    CHECK(durrmeyer_moment(4, 1, {0, 0}, t) == doctest::Approx((4 * t + 1) / 6).epsilon(1e-14));
    CHECK(durrmeyer_moment(7, 2, {0, 0}, t) == doctest::Approx(oracle::durrmeyer_e2(7, t)).epsilon(1e-14));
  }
  CHECK(durrmeyer_moment(3, 2, {0, 0}, 0.5) == doctest::Approx(9.5 / 30).epsilon(1e-14));

  for (const auto& p : kPairs) {
    for (int r = 0; r <= 4; ++r) {
      const RealFn er = [r](double t) { return std::pow(t, r); };
      const BernsteinPoly M = durrmeyer_poly(er, 11, p);
      for (int i = 0; i <= 10; ++i) {
        const double t = i / 10.0;
        CHECK(std::abs(durrmeyer_moment(11, r, p, t) - M(t)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("printed moment factor is off by three in the constant term at r = 2") {
  for (int n : {3, 10, 50}) {
    const double corrected = durrmeyer_moment(n, 2, {0, 0}, 0.0, MomentForm::Corrected);
    const double printed = durrmeyer_moment(n, 2, {0, 0}, 0.0, MomentForm::Printed);
    CHECK(corrected == doctest::Approx(2.0 / ((n + 2) * (n + 3))).epsilon(1e-14));
    CHECK(printed / corrected == doctest::Approx(3.0).epsilon(1e-14));
  }
}

TEST_CASE("functional moments") {
  const JacobiParams zero{0, 0};
  const auto m = functional_moments(4, 1, 0, zero);
  CHECK(m.b0 == 1.0);
  CHECK(m.c0 == 1.0);
  CHECK(m.b1 == doctest::Approx(2.0 / 7).epsilon(1e-15));
  CHECK(m.c1 == doctest::Approx(1.0 / 5).epsilon(1e-15));
  CHECK(std::abs(functional_A(e0, 4, 1, 0, zero)) <= 1e-14);
  CHECK(functional_A(e1, 4, 1, 0, zero) == doctest::Approx(3.0 / 35).epsilon(1e-13));

  for (const auto& p : kPairs) {
    for (int k = 0; k <= 10; ++k) {
      const auto c = functional_moments(12, 2, k, p);
      const auto q = functional_moments_numeric(12, 2, k, p);
      CHECK(std::abs(c.b0 - q.b0) <= 1e-10);
      CHECK(std::abs(c.b1 - q.b1) <= 1e-10);
      CHECK(std::abs(c.b2 - q.b2) <= 1e-10);
      CHECK(std::abs(c.c0 - q.c0) <= 1e-10);
      CHECK(std::abs(c.c1 - q.c1) <= 1e-10);
      CHECK(std::abs(c.c2 - q.c2) <= 1e-10);
    }
  }
  CHECK_THROWS_AS(functional_moments(5, 2, 4, zero), ParameterError);
}

TEST_CASE("functionals behave like averages (variance-form estimate)") {
  const RealFn s = [](double t) { return std::sin(2 * oracle::pi * t); };
  const double s2 = 4 * oracle::pi * oracle::pi;  // ‖φ″‖ for sin(2πx)
  for (const auto& p : kPairs) {
    for (int k = 0; k <= 10; ++k) {
      const auto mom = functional_moments(12, 2, k, p);
      for (int which = 0; which < 2; ++which) {
        const double m1 = which ? mom.c1 : mom.b1;
        const double m2 = which ? mom.c2 : mom.b2;
        auto F = [&](const RealFn& phi) {
          return which ? functional_C(phi, 12, 2, k, p) : functional_B(phi, 12, 2, k, p);
        };
        const double var = m2 - m1 * m1;
        CHECK(std::abs(F(e2) - m1 * m1) <= var * 2.0 / 2 + 1e-10);
        CHECK(std::abs(F(s) - s(m1)) <= var * s2 / 2 + 1e-10);
      }
    }
  }
}

TEST_CASE("functional difference bound") {
  const RealFn s = [](double t) { return std::sin(2 * oracle::pi * t); };
  const SmoothFn sf = smooth_fn(parse("sin(2*pi*x)"), 3);
  for (const auto& p : {JacobiParams{0, 0}, JacobiParams{0.5, -0.5}}) {
    const int n = 20;
    const double ab = p.alpha + p.beta;
    for (int r = 1; r <= 3; ++r) {
      const double s3 = n + ab + 3;
      const double s2 = n + 2 + ab;
      const double delta = r * (n - r + std::abs(p.beta - p.alpha)) / (s2 * s2 - r * r);
      const double w = modulus(s, delta, 2001, sf.fn(1)).value_lipschitz.value();
      const double bound = 0.25 * 4 * oracle::pi * oracle::pi * s3 / (s3 * s3 - r * r) + w;
      for (int k = 0; k <= n - r; ++k) CHECK(std::abs(functional_A(s, n, r, k, p)) <= bound);
    }
  }
}

TEST_CASE("genuine operator examples") {
  const RealFn g = [](double t) { return std::exp(t) * std::cos(5 * t); };
  for (int n : {2, 5, 30}) {
    CHECK(genuine_eval(g, n, 0.0) == doctest::Approx(g(0.0)).epsilon(1e-14));
    CHECK(genuine_eval(g, n, 1.0) == doctest::Approx(g(1.0)).epsilon(1e-14));
    for (int i = 0; i <= 10; ++i) CHECK(std::abs(genuine_eval(e0, n, i / 10.0) - 1.0) <= 1e-12);
  }
  for (int i = 0; i <= 10; ++i) CHECK(std::abs(genuine_eval(e1, 5, i / 10.0) - i / 10.0) <= 1e-12);
  // U_n e_2 = x² + 2x(1 − x)/(n + 1)
  for (int i = 0; i <= 10; ++i) {
    const double t = i / 10.0;
    CHECK(genuine_eval(e2, 10, t) == doctest::Approx(t * t + 2 * t * (1 - t) / 11).epsilon(1e-13));
  }
  CHECK_THROWS_AS(genuine_eval(e1, 1, 0.5), ParameterError);
}

TEST_CASE("genuine scaled derivative") {
  const SmoothFn lin = smooth_fn(parse("x"), 1);
  for (int n : {3, 10, 50}) {
    CHECK(genuine_scale(n, 1) == doctest::Approx(1.0).epsilon(1e-14));
    for (double t : {0.0, 0.3, 1.0}) CHECK(genuine_deriv_scaled(lin, n, 1, t) == doctest::Approx(1.0).epsilon(1e-12));
  }
  // (n+r−1)!(n−r)!/((n−1)!n!) at n = 6, r = 2: 7!·4!/(5!·6!) = 1.4
  CHECK(genuine_scale(6, 2) == doctest::Approx(1.4).epsilon(1e-14));

  const SmoothFn f = smooth_fn(parse(oracle::example_sources()[3]), 3);
  const double h = 1e-5;
  for (int i = 1; i < 10; ++i) {
    const double t = i / 10.0;
    const double fd = (genuine_eval(f.fn(0), 10, t + h) - genuine_eval(f.fn(0), 10, t - h)) / (2 * h);
    CHECK(std::abs(genuine_deriv_scaled(f, 10, 1, t) - fd) <= 1e-5);
  }
  // unscaled r = 2 against differentiating the Bernstein form of U_n f
  const BernsteinPoly U = genuine_poly(f.fn(0), 12);
  CHECK(grid_max_abs_diff(U.derivative(2), genuine_deriv_poly(f, 12, 2)) <= 1e-10);
  CHECK_THROWS_AS(genuine_deriv_scaled(f, 10, 9, 0.5), ParameterError);
}

TEST_CASE("Durrmeyer tends to the genuine operator as both exponents approach -1") {
  const RealFn f = oracle::ex4;
  const BernsteinPoly U = genuine_poly(f, 10);
  double prev = 1e300;
  for (double eps : {0.1, 0.01, 0.001}) {
    const BernsteinPoly M = durrmeyer_poly(f, 10, {-1 + eps, -1 + eps});
    const double gap = grid_max_abs_diff(M, U, 51);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev <= 0.05);
}

TEST_CASE("operator integrals are stable under node doubling") {
  const SmoothFn f = smooth_fn(parse(oracle::example_sources()[0]), 3);
  const QuadOptions base, doubled{50, 2};
  for (Family fam : {Family::Durrmeyer, Family::Genuine}) {
    for (int n : {20, 50}) {
      OperatorSpec s;
      s.family = fam;
      s.n = n;
      s.r = 2;
      s.jacobi = {0.5, -0.5};
      const BernsteinPoly a = operator_derivative(s, f, base);
      const BernsteinPoly b = operator_derivative(s, f, doubled);
      const double scale = a.coeffs().cwiseAbs().maxCoeff();
      CHECK((a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    }
  }
}
