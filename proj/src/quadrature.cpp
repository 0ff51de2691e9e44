#include "opdiff/quadrature.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "opdiff/errors.hpp"
#include "opdiff/special.hpp"
#include "opdiff/tridiagonal.hpp"

namespace opdiff {

double QuadRule::mass() const {
  return kind == WeightKind::Jacobi ? opdiff::beta(alpha + 1, beta + 1) : 1.0;
}

namespace {

// Three-term recurrence of the monic Jacobi polynomials orthogonal on [−1, 1]
// for (1 − x)^a (1 + x)^b, written as the symmetric Jacobi matrix.
void jacobi_matrix(int m, double a, double b, Eigen::VectorXd& diag, Eigen::VectorXd& sub) {
  diag.resize(m);
  sub.resize(m - 1);
  const double ab = a + b;
  diag(0) = (b - a) / (ab + 2);
  for (int n = 1; n < m; ++n) {
    const double t = 2.0 * n + ab;
    diag(n) = (b * b - a * a) / (t * (t + 2));
  }
  for (int n = 1; n < m; ++n) {
    const double t = 2.0 * n + ab;
    double v;
    if (n == 1) {
      v = 4 * (1 + a) * (1 + b) / ((2 + ab) * (2 + ab) * (3 + ab));
    } else {
      v = 4.0 * n * (n + a) * (n + b) * (n + ab) / (t * t * (t + 1) * (t - 1));
    }
    sub(n - 1) = std::sqrt(v);
  }
}

struct RuleCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, double, double>, std::unique_ptr<const QuadRule>> rules;
};

RuleCache& cache() {
  static RuleCache c;
  return c;
}

}  // namespace

QuadRule build_gauss_rule(WeightKind kind, int m, double alpha, double beta) {
  if (m < 1) throw ParameterError("gauss_rule: node count must be >= 1");
  if (kind == WeightKind::Legendre) {
    alpha = 0.0;
    beta = 0.0;
  }
  if (!(alpha > -1) || !(beta > -1)) throw ParameterError("gauss_rule: Jacobi exponents must exceed -1");

  Eigen::VectorXd diag, sub;
  // t = (1 + x)/2, so t^alpha pairs with (1 + x) and (1 − t)^beta with (1 − x).
  jacobi_matrix(m, beta, alpha, diag, sub);
  const auto spectrum = tridiagonal_spectrum<double>(diag, sub);

  QuadRule rule;
  rule.kind = kind;
  rule.alpha = alpha;
  rule.beta = beta;
  rule.nodes = (1.0 + spectrum.values.array()) / 2.0;
  rule.complements = (1.0 - spectrum.values.array()) / 2.0;
  rule.weights = rule.mass() * spectrum.first_components.array().square();
  return rule;
}

const QuadRule& gauss_rule(WeightKind kind, int m, double alpha, double beta) {
  if (kind == WeightKind::Legendre) {
    alpha = 0.0;
    beta = 0.0;
  }
  auto& c = cache();
  const auto key = std::make_tuple(static_cast<int>(kind), m, alpha, beta);
  {
    std::lock_guard lock(c.mutex);
    if (auto it = c.rules.find(key); it != c.rules.end()) return *it->second;
  }
  auto rule = std::make_unique<const QuadRule>(build_gauss_rule(kind, m, alpha, beta));
  std::lock_guard lock(c.mutex);
  auto [it, inserted] = c.rules.emplace(key, std::move(rule));
  return *it->second;
}

// ---------------------------------------------------------------------------

Antiderivative::Antiderivative(RealFn f, int order, int panels)
    : f_(std::move(f)), order_(order), panels_(panels), h_(1.0 / panels) {
  if (order < 1) throw ParameterError("antiderivative: order must be >= 1");
  if (panels < 64) throw ParameterError("antiderivative: at least 64 panels required");

  const QuadRule& rule = legendre_rule(16);
  table_ = Eigen::MatrixXd::Zero(panels + 1, order);
  Eigen::VectorXd fvals(rule.count());
  Eigen::VectorXd kernel(rule.count());
  for (int i = 0; i < panels; ++i) {
    const double a = i * h_;
    for (Eigen::Index q = 0; q < rule.count(); ++q) fvals(q) = f_(a + h_ * rule.nodes(q));
    for (int j = 1; j <= order; ++j) {
      // Taylor part from the lower breakpoint.
      double v = 0.0;
      double term = 1.0;
      for (int l = 0; l < j; ++l) {
        v += table_(i, j - l - 1) * term;
        term *= h_ / (l + 1);
      }
      // Remainder ∫_a^{a+h} (a + h − t)^{j−1}/(j−1)! f(t) dt.
      double fact = 1.0;
      for (int l = 2; l < j; ++l) fact *= l;
      for (Eigen::Index q = 0; q < rule.count(); ++q) {
        kernel(q) = std::pow(h_ * rule.complements(q), j - 1) / fact;
      }
      v += h_ * (rule.weights.array() * kernel.array() * fvals.array()).sum();
      table_(i + 1, j - 1) = v;
    }
  }
}

double Antiderivative::value(int j, double x) const {
  if (j < 1 || j > order_) throw ParameterError("Antiderivative::value: order out of range");
  const int i = std::clamp(static_cast<int>(std::lround(x / h_)), 0, panels_);
  const double b = i * h_;
  const double dx = x - b;

  double v = 0.0;
  double term = 1.0;
  for (int l = 0; l < j; ++l) {
    v += table_(i, j - l - 1) * term;
    term *= dx / (l + 1);
  }
  if (dx != 0.0) {
    const QuadRule& rule = legendre_rule(16);
    double fact = 1.0;
    for (int l = 2; l < j; ++l) fact *= l;
    double s = 0.0;
    for (Eigen::Index q = 0; q < rule.count(); ++q) {
      const double t = b + dx * rule.nodes(q);
      s += rule.weights(q) * std::pow(dx * rule.complements(q), j - 1) / fact * f_(t);
    }
    v += dx * s;
  }
  return v;
}

Antiderivative antiderivative(const SmoothFn& f, int k, int panels) { return Antiderivative(f.fn(0), k, panels); }

}  // namespace opdiff
