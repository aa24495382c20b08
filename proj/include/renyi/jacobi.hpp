#pragma once

#include <cmath>
#include <vector>

#include "renyi/errors.hpp"

namespace renyi {

struct EigenSystem {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // vectors[k] = k-th eigenvector
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix.  Sweeps until the
// largest off-diagonal magnitude drops below `threshold` (default 1e-12),
// at most `max_sweeps` sweeps.
inline EigenSystem jacobi_eigensymm(std::vector<std::vector<double>> a,
                                    double threshold = 1e-12,
                                    int max_sweeps = 100) {
  const std::size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw ValidationError("jacobi: matrix not square");
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        off = std::max(off, std::abs(a[p][q]));
    if (off <= threshold) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) <= threshold) continue;
        const double apq = a[p][q];
        const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        const double h = t * apq;
        a[p][p] -= h;
        a[q][q] += h;
        a[p][q] = a[q][p] = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j != p && j != q) {
            const double ajp = a[j][p], ajq = a[j][q];
            a[j][p] = a[p][j] = ajp - s * (ajq + tau * ajp);
            a[j][q] = a[q][j] = ajq + s * (ajp - tau * ajq);
          }
          const double vjp = v[j][p], vjq = v[j][q];
          v[j][p] = vjp - s * (vjq + tau * vjp);
          v[j][q] = vjq + s * (vjp - tau * vjq);
        }
      }
    }
  }
  EigenSystem es;
  es.values.resize(n);
  es.vectors.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    es.values[k] = a[k][k];
    for (std::size_t j = 0; j < n; ++j) es.vectors[k][j] = v[j][k];
  }
  return es;
}

}  // namespace renyi
