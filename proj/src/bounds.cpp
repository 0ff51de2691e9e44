#include "opdiff/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "opdiff/errors.hpp"

namespace opdiff {

Eigen::VectorXd uniform_grid(int points) {
  if (points < 2) throw ParameterError("uniform_grid: need at least 2 points");
  Eigen::VectorXd g(points);
  for (int i = 0; i < points; ++i) g(i) = double(i) / (points - 1);
  g(points - 1) = 1.0;
  return g;
}

double sup_norm(const RealFn& f, int grid_points) {
  const Eigen::VectorXd g = uniform_grid(grid_points);
  double s = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) s = std::max(s, std::abs(f(g(i))));
  return s;
}

namespace {

// max over windows of `width + 1` consecutive samples of (max − min).
double window_oscillation(const Eigen::VectorXd& v, Eigen::Index width) {
  if (width <= 0) return 0.0;
  std::deque<Eigen::Index> hi, lo;
  double best = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    while (!hi.empty() && v(hi.back()) <= v(j)) hi.pop_back();
    while (!lo.empty() && v(lo.back()) >= v(j)) lo.pop_back();
    hi.push_back(j);
    lo.push_back(j);
    while (hi.front() < j - width) hi.pop_front();
    while (lo.front() < j - width) lo.pop_front();
    best = std::max(best, v(hi.front()) - v(lo.front()));
  }
  return best;
}

}  // namespace

ModulusEstimate modulus(const RealFn& f, double delta, int grid_points, const std::optional<RealFn>& f_prime) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw ParameterError("modulus: delta must lie in [0, 1]");
  ModulusEstimate est;
  est.delta = delta;
  est.grid_points = grid_points;
  if (f_prime) est.value_lipschitz = sup_norm(*f_prime, grid_points) * delta;
  if (delta == 0.0) {
    est.value_grid = 0.0;
    return est;
  }

  const Eigen::VectorXd g = uniform_grid(grid_points);
  Eigen::VectorXd v(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) v(i) = f(g(i));

  const double cells = delta * (grid_points - 1);
  const auto width = static_cast<Eigen::Index>(std::floor(cells + 1e-9));
  double w = window_oscillation(v, width);
  // exact-δ pairs anchored at both ends, so (0, δ) and (1 − δ, 1) are both seen
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (g(i) + delta <= 1.0) w = std::max(w, std::abs(f(g(i) + delta) - v(i)));
    if (g(i) - delta >= 0.0) w = std::max(w, std::abs(v(i) - f(g(i) - delta)));
  }
  est.value_grid = w;
  return est;
}

// ---------------------------------------------------------------------------

std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::Thm1: return "thm1";
    case TheoremId::Thm2: return "thm2";
    case TheoremId::Thm3: return "thm3";
    case TheoremId::Thm4: return "thm4";
    case TheoremId::Thm5: return "thm5";
    case TheoremId::Cor1: return "cor1";
    case TheoremId::Cor2: return "cor2";
    case TheoremId::Thm6: return "thm6";
  }
  return "unknown";
}

TheoremId theorem_from_string(const std::string& name) {
  for (auto id : {TheoremId::Thm1, TheoremId::Thm2, TheoremId::Thm3, TheoremId::Thm4, TheoremId::Thm5,
                  TheoremId::Cor1, TheoremId::Cor2, TheoremId::Thm6}) {
    if (to_string(id) == name) return id;
  }
  throw ParameterError("unknown theorem '" + name + "'");
}

Family family_of(TheoremId id) {
  switch (id) {
    case TheoremId::Thm1: return Family::Bernstein;
    case TheoremId::Thm2: return Family::Kantorovich;
    case TheoremId::Thm3: return Family::QOp;
    case TheoremId::Thm6: return Family::Genuine;
    default: return Family::Durrmeyer;
  }
}

int required_order(TheoremId id, int r) {
  switch (id) {
    case TheoremId::Thm1:
    case TheoremId::Thm2:
    case TheoremId::Thm3: return r;
    default: return r + 2;
  }
}

bool is_scaled(TheoremId id) {
  return id == TheoremId::Thm4 || id == TheoremId::Cor1 || id == TheoremId::Thm6;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::HoldsLoose: return "holds_loose";
    case Verdict::Violated: return "violated";
  }
  return "unknown";
}

double RhsTerms::extras() const {
  double s = 0.0;
  for (const auto& t : extra_terms) s += t.value;
  return s;
}

void check_pairing(TheoremId id, const OperatorSpec& spec) {
  if (spec.family != family_of(id)) {
    throw ParameterError(to_string(id) + " is about the " + to_string(family_of(id)) + " family, not " +
                         to_string(spec.family));
  }
  spec.validate();
  if ((id == TheoremId::Cor1 || id == TheoremId::Cor2) && (spec.jacobi.alpha != 0.0 || spec.jacobi.beta != 0.0)) {
    throw ParameterError(to_string(id) + " concerns the classical Durrmeyer operator (alpha = beta = 0)");
  }
  if ((id == TheoremId::Thm4 || id == TheoremId::Cor1) && spec.r < 1) {
    throw ParameterError(to_string(id) + " requires r >= 1");
  }
  if (id == TheoremId::Thm6 && spec.r < 1) throw ParameterError("thm6 requires 1 <= r <= n - 2");
  if (spec.n - spec.r < 1) throw ParameterError("the comparison operator needs n - r >= 1");
  if (spec.family == Family::Genuine && spec.n - spec.r < 2) {
    throw ParameterError("U_{n-r} needs n - r >= 2");
  }
}

RhsTerms theorem_rhs(TheoremId id, const OperatorSpec& spec, const SmoothFn& f, int grid_points) {
  check_pairing(id, spec);
  const int r = spec.r;
  if (f.max_order() < required_order(id, r)) {
    throw ParameterError(to_string(id) + " needs derivatives of f up to order " +
                         std::to_string(required_order(id, r)) + ", have " + std::to_string(f.max_order()));
  }
  const double n = spec.n;
  const double a = spec.jacobi.alpha;
  const double b = spec.jacobi.beta;
  const double ab = a + b;

  const RealFn fr = f.fn(r);
  const double norm_r = sup_norm(fr, grid_points);
  auto norm_of = [&](int order) { return sup_norm(f.fn(order), grid_points); };

  RhsTerms t;
  double supnorm_coeff = 0.0;
  switch (id) {
    case TheoremId::Thm1:
      supnorm_coeff = (r - 1.0) * r / (2 * n);
      t.modulus_delta = r / n;
      break;
    case TheoremId::Thm2:
      supnorm_coeff = (r + 1.0) * r / (2 * (n + 1));
      t.modulus_delta = (r + 1.0) / (n + 1);
      break;
    case TheoremId::Thm3:
      supnorm_coeff = (2.0 * spec.k + r - 1) * r / (2 * n);
      t.modulus_delta = (spec.k + r) / n;
      break;
    case TheoremId::Thm4:
    case TheoremId::Thm5:
    case TheoremId::Cor1:
    case TheoremId::Cor2: {
      const double s3 = n + ab + 3;
      t.extra_terms.push_back({"second_derivative_term", 0.25 * norm_of(r + 2) * s3 / (s3 * s3 - double(r) * r)});
      const double s2 = n + 2 + ab;
      t.modulus_delta = r * (n - r + std::abs(b - a)) / (s2 * s2 - double(r) * r);
      if (id == TheoremId::Thm5 || id == TheoremId::Cor2) supnorm_coeff = r * (ab + r + 1) / (n + ab + 2);
      break;
    }
    case TheoremId::Thm6: {
      t.extra_terms.push_back({"second_derivative_term", 0.25 * (n + 1) / ((n + 1) * (n + 1) - double(r) * r) *
                                                             norm_of(r + 2)});
      t.extra_terms.push_back({"endpoint_term", r / (n + r) * norm_of(r + 1)});
      t.modulus_delta = r * (n - 2 - r) / (n * n - double(r) * r);
      break;
    }
  }
  t.supnorm_term = supnorm_coeff * norm_r;

  std::optional<RealFn> fprime;
  if (f.max_order() >= r + 1) fprime = f.fn(r + 1);
  const ModulusEstimate w = modulus(fr, std::clamp(t.modulus_delta, 0.0, 1.0), grid_points, fprime);
  t.modulus_term_grid = w.value_grid;
  t.modulus_term_lipschitz = w.value_lipschitz.value_or(w.value_grid);
  return t;
}

Verdict classify(double lhs_sup, double rhs_grid, double rhs_lipschitz) {
  if (lhs_sup <= rhs_grid * (1 + kVerdictRelTol) + kVerdictAbsTol) return Verdict::Holds;
  if (lhs_sup <= rhs_lipschitz * (1 + kVerdictRelTol) + kVerdictAbsTol) return Verdict::HoldsLoose;
  return Verdict::Violated;
}

BernsteinPoly theorem_difference(TheoremId id, const OperatorSpec& spec, const SmoothFn& f, const QuadOptions& q) {
  check_pairing(id, spec);
  const int n = spec.n;
  const int r = spec.r;
  const BernsteinPoly lower = operator_image(spec, n - r, f.fn(r), q);
  BernsteinPoly upper;
  switch (id) {
    case TheoremId::Thm4:
    case TheoremId::Cor1:
      upper = durrmeyer_deriv_poly(f, n, r, spec.jacobi, q) * durrmeyer_scale(n, r, spec.jacobi);
      break;
    case TheoremId::Thm6:
      upper = genuine_deriv_scaled_poly(f, n, r, q);
      break;
    default:
      upper = operator_derivative(spec, f, q);
      break;
  }
  return BernsteinPoly(upper.coeffs() - lower.coeffs());
}

namespace {

double sup_on_grid(const BernsteinPoly& p, int points) { return p(uniform_grid(points)).cwiseAbs().maxCoeff(); }

bool drifted(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale < 1e-12) return false;
  return std::abs(a - b) > 1e-3 * scale;
}

}  // namespace

BoundReport verify(TheoremId id, const OperatorSpec& spec, const SmoothFn& f, const VerifyOptions& opt) {
  check_pairing(id, spec);
  BoundReport rep;
  rep.theorem = id;
  rep.spec = spec;
  rep.grid_points = opt.norm_grid;
  rep.lhs_grid_points = opt.lhs_grid;
  rep.rhs = theorem_rhs(id, spec, f, opt.norm_grid);
  rep.rhs_total_grid = rep.rhs.total_grid();
  rep.rhs_total_lipschitz = rep.rhs.total_lipschitz();

  const BernsteinPoly diff = theorem_difference(id, spec, f, opt.quad);
  rep.lhs_sup = sup_on_grid(diff, opt.lhs_grid);
  rep.verdict = classify(rep.lhs_sup, rep.rhs_total_grid, rep.rhs_total_lipschitz);

  if (rep.rhs_total_grid > rep.rhs_total_lipschitz * (1 + kVerdictRelTol) + kVerdictAbsTol) {
    rep.flags.push_back("grid_modulus_exceeds_lipschitz");
  }
  if (opt.check_refinement) {
    const int fine = 2 * (opt.norm_grid - 1) + 1;
    const double lhs_a = sup_on_grid(diff, opt.norm_grid);
    const double lhs_b = sup_on_grid(diff, fine);
    if (drifted(lhs_a, lhs_b)) rep.flags.push_back("lhs_refinement_drift");
    const RealFn fr = f.fn(spec.r);
    const double delta = std::clamp(rep.rhs.modulus_delta, 0.0, 1.0);
    const double w_a = modulus(fr, delta, opt.norm_grid).value_grid;
    const double w_b = modulus(fr, delta, fine).value_grid;
    if (drifted(w_a, w_b)) rep.flags.push_back("modulus_refinement_drift");
  }
  return rep;
}

}  // namespace opdiff
