#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "opdiff/errors.hpp"

namespace opdiff {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Eigenvalues of a symmetric tridiagonal matrix together with the first
/// component of each normalized eigenvector, sorted by eigenvalue.
template <typename Scalar>
struct TridiagonalSpectrum {
  Vector<Scalar> values;
  Vector<Scalar> first_components;
};

/// Implicit-shift QL on the symmetric tridiagonal matrix with the given
/// diagonal and sub-diagonal (size n−1). Only the first row of the
/// eigenvector matrix is carried along, which is all Golub–Welsch needs.
template <typename Scalar>
TridiagonalSpectrum<Scalar> tridiagonal_spectrum(const Vector<Scalar>& diagonal,
                                                 const Vector<Scalar>& subdiagonal,
                                                 int max_iterations = 50) {
  using std::abs;
  const Eigen::Index n = diagonal.size();
  if (subdiagonal.size() != std::max<Eigen::Index>(n - 1, 0)) {
    throw ParameterError("tridiagonal_spectrum: sub-diagonal must have n-1 entries");
  }
  Vector<Scalar> d = diagonal;
  Vector<Scalar> e = Vector<Scalar>::Zero(n);
  e.head(std::max<Eigen::Index>(n - 1, 0)) = subdiagonal;
  Vector<Scalar> z = Vector<Scalar>::Zero(n);
  if (n > 0) z(0) = Scalar(1);

  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  for (Eigen::Index l = 0; l < n; ++l) {
    int iter = 0;
    Eigen::Index m;
    do {
      for (m = l; m < n - 1; ++m) {
        const Scalar dd = abs(d(m)) + abs(d(m + 1));
        if (abs(e(m)) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == max_iterations) {
          throw ConvergenceError("tridiagonal_spectrum: no convergence for eigenvalue " + std::to_string(l) +
                                 " after " + std::to_string(max_iterations) + " iterations");
        }
        Scalar g = (d(l + 1) - d(l)) / (Scalar(2) * e(l));
        Scalar r = std::hypot(g, Scalar(1));
        g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
        Scalar s = 1, c = 1, p = 0;
        Eigen::Index i;
        bool underflow = false;
        for (i = m - 1; i >= l; --i) {
          const Scalar f = s * e(i);
          const Scalar b = c * e(i);
          r = std::hypot(f, g);
          e(i + 1) = r;
          if (r == Scalar(0)) {
            d(i + 1) -= p;
            e(m) = 0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d(i + 1) - p;
          r = (d(i) - g) * s + Scalar(2) * c * b;
          p = s * r;
          d(i + 1) = g + p;
          g = c * r - b;
          const Scalar zf = z(i + 1);
          z(i + 1) = s * z(i) + c * zf;
          z(i) = c * z(i) - s * zf;
        }
        if (underflow) continue;
        d(l) -= p;
        e(l) = g;
        e(m) = 0;
      }
    } while (m != l);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return d(a) < d(b); });
  TridiagonalSpectrum<Scalar> out{Vector<Scalar>(n), Vector<Scalar>(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = d(order[static_cast<std::size_t>(i)]);
    out.first_components(i) = z(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace opdiff
