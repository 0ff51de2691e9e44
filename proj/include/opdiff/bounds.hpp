#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "opdiff/expr.hpp"
#include "opdiff/operators.hpp"

namespace opdiff {

/// n points spaced uniformly over [0, 1], both ends included.
Eigen::VectorXd uniform_grid(int points);

/// max |f| over the uniform grid: a lower estimate of the sup norm.
double sup_norm(const RealFn& f, int grid_points);

struct ModulusEstimate {
  double delta = 0.0;
  int grid_points = 0;
  double value_grid = 0.0;                // lower estimate from grid pairs
  std::optional<double> value_lipschitz;  // sup_norm(f′)·delta
};

/// ω(f, δ) = sup{|f(u) − f(v)| : |u − v| <= δ} estimated from below on the
/// grid: a sliding window of floor(δ/h) cells plus the pairs (u_i, u_i ± δ).
ModulusEstimate modulus(const RealFn& f, double delta, int grid_points,
                        const std::optional<RealFn>& f_prime = std::nullopt);

enum class TheoremId { Thm1, Thm2, Thm3, Thm4, Thm5, Cor1, Cor2, Thm6 };

std::string to_string(TheoremId id);
TheoremId theorem_from_string(const std::string& name);

/// Operator family each estimate is about.
Family family_of(TheoremId id);

/// Highest derivative of f the right-hand side consumes.
int required_order(TheoremId id, int r);

/// Whether the left side carries the Gamma-ratio scaling.
bool is_scaled(TheoremId id);

struct NamedTerm {
  std::string name;
  double value;
};

struct RhsTerms {
  double supnorm_term = 0.0;
  double modulus_delta = 0.0;
  double modulus_term_grid = 0.0;
  double modulus_term_lipschitz = 0.0;
  std::vector<NamedTerm> extra_terms;

  double extras() const;
  double total_grid() const { return supnorm_term + modulus_term_grid + extras(); }
  double total_lipschitz() const { return supnorm_term + modulus_term_lipschitz + extras(); }
};

RhsTerms theorem_rhs(TheoremId id, const OperatorSpec& spec, const SmoothFn& f, int grid_points);

enum class Verdict { Holds, HoldsLoose, Violated };
std::string to_string(Verdict v);

struct VerifyOptions {
  int lhs_grid = 501;
  int norm_grid = 2001;
  QuadOptions quad;
  bool check_refinement = false;  // rerun on doubled grids and flag drift
};

struct BoundReport {
  TheoremId theorem = TheoremId::Thm1;
  OperatorSpec spec;
  double lhs_sup = 0.0;
  RhsTerms rhs;
  double rhs_total_grid = 0.0;
  double rhs_total_lipschitz = 0.0;
  Verdict verdict = Verdict::Holds;
  int grid_points = 0;      // sup-norm / modulus grid
  int lhs_grid_points = 0;  // grid for lhs_sup
  std::vector<std::string> flags;
};

/// Absolute slack added to the relative verdict tolerance; covers
/// differences that vanish identically and leave only rounding.
inline constexpr double kVerdictRelTol = 1e-9;
inline constexpr double kVerdictAbsTol = 1e-12;

Verdict classify(double lhs_sup, double rhs_grid, double rhs_lipschitz);

/// Throws ParameterError when the theorem does not apply to `spec`.
void check_pairing(TheoremId id, const OperatorSpec& spec);

/// The difference whose sup norm the theorem bounds, as a polynomial:
/// (scale)·(L_n f)^{(r)} − L_{n−r}(f^{(r)}).
BernsteinPoly theorem_difference(TheoremId id, const OperatorSpec& spec, const SmoothFn& f,
                                 const QuadOptions& q = {});

BoundReport verify(TheoremId id, const OperatorSpec& spec, const SmoothFn& f, const VerifyOptions& opt = {});

}  // namespace opdiff
