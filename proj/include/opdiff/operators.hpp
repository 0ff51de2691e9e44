#pragma once

#include <string>

#include "opdiff/bernstein.hpp"
#include "opdiff/expr.hpp"

namespace opdiff {

/// Exponents of the Jacobi weight t^alpha (1 − t)^beta; both exceed −1.
struct JacobiParams {
  double alpha = 0.0;
  double beta = 0.0;

  void validate() const;
};

enum class Family { Bernstein, Kantorovich, QOp, Durrmeyer, Genuine };

std::string to_string(Family f);
Family family_from_string(const std::string& name);

struct OperatorSpec {
  Family family = Family::Bernstein;
  int n = 1;
  int r = 0;
  int k = 1;            // QOp only
  JacobiParams jacobi;  // Durrmeyer only

  /// Throws ParameterError when (n, r, k) are outside the family's range.
  void validate() const;
};

/// Node counts for operator integrals: scale·(n + extra), with the Durrmeyer
/// rule raised fourfold when a Jacobi exponent is at or below −0.9.
struct QuadOptions {
  int extra = 50;
  int scale = 1;

  int nodes(int n) const { return scale * (n + extra); }
  int jacobi_nodes(int n, const JacobiParams& p) const;
};

// Kantorovich ---------------------------------------------------------------

/// (K_n f)^{(r)} as a polynomial of degree n − r, from Δ^r of the panel
/// integrals ∫_{i/(n+1)}^{(i+1)/(n+1)} f.
BernsteinPoly kantorovich_poly(const RealFn& f, int n, int r = 0);
double kantorovich_eval(const RealFn& f, int n, double x);
double kantorovich_deriv(const RealFn& f, int n, int r, double x);

// Durrmeyer with Jacobi weights ---------------------------------------------

/// c_{n,k} = ∫ p_{n,k}(t) w(t) dt = gen_binom(n, k)·B(k + α + 1, n − k + β + 1).
double durrmeyer_c(int n, int k, const JacobiParams& p);

BernsteinPoly durrmeyer_poly(const RealFn& f, int n, const JacobiParams& p, const QuadOptions& q = {});
double durrmeyer_eval(const RealFn& f, int n, const JacobiParams& p, double x, const QuadOptions& q = {});

/// n(n−1)…(n−r+1) / ((n+α+β+2)…(n+α+β+r+1)).
double abel_prefactor(int n, int r, const JacobiParams& p);

/// Γ(n+α+β+r+2)Γ(n−r+1) / (Γ(n+α+β+2)Γ(n+1)), the scaling in the Jacobi
/// Durrmeyer difference estimate.
double durrmeyer_scale(int n, int r, const JacobiParams& p);

/// (M_n f)^{(r)} = abel_prefactor·M_{n−r}^{(α+r, β+r)} f^{(r)}.
BernsteinPoly durrmeyer_deriv_poly(const SmoothFn& f, int n, int r, const JacobiParams& p,
                                   const QuadOptions& q = {});
double durrmeyer_deriv(const SmoothFn& f, int n, int r, const JacobiParams& p, double x,
                       const QuadOptions& q = {});

/// Second route to (M_n f)^{(r)}: the Gamma ratio times
/// Σ_k p_{n−r,k}(x) ∫ p_{n+α+β+r, k+α+r}(t) f^{(r)}(t) dt, each integral on
/// the Gauss rule of its own basis weight.
BernsteinPoly durrmeyer_deriv_poly_generalized(const SmoothFn& f, int n, int r, const JacobiParams& p,
                                               const QuadOptions& q = {});

enum class MomentForm {
  Corrected,  // factor (α + k + 1)^{rising r−k}
  Printed,    // factor (α + r)^{rising r−k}
};

/// Closed form of M_n^{(α,β)}(e_r; x).
double durrmeyer_moment(int n, int r, const JacobiParams& p, double x, MomentForm form = MomentForm::Corrected);

// Functionals B_{n,k}, C_{n,k} and A = B − C ----------------------------------

struct FunctionalMoments {
  double b0, b1, b2;
  double c0, c1, c2;
};

FunctionalMoments functional_moments(int n, int r, int k, const JacobiParams& p);
FunctionalMoments functional_moments_numeric(int n, int r, int k, const JacobiParams& p, const QuadOptions& q = {});

double functional_B(const RealFn& phi, int n, int r, int k, const JacobiParams& p, const QuadOptions& q = {});
double functional_C(const RealFn& phi, int n, int r, int k, const JacobiParams& p, const QuadOptions& q = {});
double functional_A(const RealFn& phi, int n, int r, int k, const JacobiParams& p, const QuadOptions& q = {});

// Genuine Bernstein–Durrmeyer -------------------------------------------------

BernsteinPoly genuine_poly(const RealFn& f, int n, const QuadOptions& q = {});
double genuine_eval(const RealFn& f, int n, double x, const QuadOptions& q = {});

/// (n+r−1)!(n−r)! / ((n−1)! n!).
double genuine_scale(int n, int r);

/// genuine_scale(n, r)·(U_n f)^{(r)} by the single-sum formula.
BernsteinPoly genuine_deriv_scaled_poly(const SmoothFn& f, int n, int r, const QuadOptions& q = {});
double genuine_deriv_scaled(const SmoothFn& f, int n, int r, double x, const QuadOptions& q = {});

/// Unscaled (U_n f)^{(r)}.
BernsteinPoly genuine_deriv_poly(const SmoothFn& f, int n, int r, const QuadOptions& q = {});

// Family dispatch -----------------------------------------------------------

/// L_n g for the family in `spec` (spec.n and spec.r are ignored).
BernsteinPoly operator_image(const OperatorSpec& spec, int n, const RealFn& g, const QuadOptions& q = {});

/// (L_n f)^{(r)}, unscaled, for spec.n and spec.r.
BernsteinPoly operator_derivative(const OperatorSpec& spec, const SmoothFn& f, const QuadOptions& q = {});

}  // namespace opdiff
