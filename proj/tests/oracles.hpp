#pragma once

// Test-only reference computations, written without Eigen's decompositions so
// they stay independent of the library paths they check.

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

/// Cyclic Jacobi rotations on a symmetric matrix; returns ascending eigenvalues.
inline std::vector<double> jacobi_eigenvalues(Dense a, int sweeps = 100) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a[i][i];
  std::sort(eig.begin(), eig.end());
  return eig;
}

/// Eigenvalues of [[a, b], [b, d]] from the characteristic polynomial.
inline std::pair<double, double> eig2(double a, double b, double d) {
  const double mean = 0.5 * (a + d);
  const double r = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  return {mean - r, mean + r};
}

template <class M>
Dense to_dense(const M& m) {
  Dense d(m.rows(), std::vector<double>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) d[i][j] = m(i, j);
  return d;
}

}  // namespace oracle
