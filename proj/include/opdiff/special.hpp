#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "opdiff/errors.hpp"

namespace opdiff {

/// ln Γ(x) for x > 0.
template <typename Scalar>
Scalar log_gamma(Scalar x) {
  if (!(x > Scalar(0))) throw DomainError("log_gamma: argument must be positive, got " + std::to_string(double(x)));
  return std::lgamma(x);
}

template <typename Scalar>
Scalar log_beta(Scalar a, Scalar b) {
  if (!(a > Scalar(0)) || !(b > Scalar(0))) {
    throw DomainError("beta: arguments must be positive, got (" + std::to_string(double(a)) + ", " +
                      std::to_string(double(b)) + ")");
  }
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

template <typename Scalar>
Scalar beta(Scalar a, Scalar b) {
  return std::exp(log_beta(a, b));
}

/// Exact C(n, k) for n <= 62; zero outside 0 <= k <= n.
inline std::uint64_t binomial_exact(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (n > 62) throw ParameterError("binomial_exact: n too large for exact arithmetic");
  k = k < n - k ? k : n - k;
  std::uint64_t c = 1;
  for (int j = 1; j <= k; ++j) c = c * std::uint64_t(n - k + j) / std::uint64_t(j);
  return c;
}

namespace detail {

inline bool is_small_integer(double v, int limit) {
  return v >= 0 && v <= limit && v == std::floor(v);
}

// Degree threshold for exact integer binomial paths.
inline constexpr int kExactBinomialLimit = 30;

}  // namespace detail

/// ln of Γ(a+1) / (Γ(b+1) Γ(a−b+1)).
template <typename Scalar>
Scalar log_gen_binom(Scalar a, Scalar b) {
  if (!(a + 1 > 0) || !(b + 1 > 0) || !(a - b + 1 > 0)) {
    throw DomainError("gen_binom: Gamma argument not positive for (a, b) = (" + std::to_string(double(a)) +
                      ", " + std::to_string(double(b)) + ")");
  }
  return log_gamma(a + 1) - log_gamma(b + 1) - log_gamma(a - b + 1);
}

/// Generalized binomial coefficient Γ(a+1) / (Γ(b+1) Γ(a−b+1)).
///
/// Integer arguments with a <= 30 take the exact path.
template <typename Scalar>
Scalar gen_binom(Scalar a, Scalar b) {
  if (detail::is_small_integer(double(a), detail::kExactBinomialLimit) &&
      detail::is_small_integer(double(b), detail::kExactBinomialLimit) && b <= a) {
    return Scalar(binomial_exact(int(a), int(b)));
  }
  return std::exp(log_gen_binom(a, b));
}

enum class FactorialTag { Rising, Falling };

struct FactorialKind {
  FactorialTag tag;
  double base;
  int length;  // >= 0; 0 is the empty product
};

template <typename Scalar>
Scalar rising_factorial(Scalar x, int length) {
  Scalar p(1);
  for (int v = 0; v < length; ++v) p *= x + Scalar(v);
  return p;
}

template <typename Scalar>
Scalar falling_factorial(Scalar x, int length) {
  Scalar p(1);
  for (int v = 0; v < length; ++v) p *= x - Scalar(v);
  return p;
}

inline double factorial_product(const FactorialKind& kind) {
  if (kind.length < 0) throw ParameterError("factorial_product: negative length");
  return kind.tag == FactorialTag::Rising ? rising_factorial(kind.base, kind.length)
                                          : falling_factorial(kind.base, kind.length);
}

}  // namespace opdiff
