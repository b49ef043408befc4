// Test-only oracle: a plain dense-tableau simplex for canonical problems
//   min c'x  s.t.  A x <= b  (b >= 0),  0 <= x <= u
// kept deliberately independent of the library's revised simplex.
#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

struct DenseLpResult {
  bool optimal = false;
  double objective = 0;
  std::vector<double> x;
};

// Upper bounds are folded in as extra rows so the tableau stays textbook.
inline DenseLpResult denseSimplex(std::vector<std::vector<double>> A,
                                  std::vector<double> b, std::vector<double> c,
                                  const std::vector<double>& upper) {
  const double inf = std::numeric_limits<double>::infinity();
  size_t n = c.size();
  for (size_t j = 0; j < n; ++j) {
    if (upper[j] == inf) continue;
    std::vector<double> row(n, 0.0);
    row[j] = 1.0;
    A.push_back(row);
    b.push_back(upper[j]);
  }
  size_t m = A.size();
  // tableau: rows m, cols n + m (slacks) + 1 (rhs)
  std::vector<std::vector<double>> T(m + 1, std::vector<double>(n + m + 1, 0.0));
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
    T[i][n + i] = 1.0;
    T[i][n + m] = b[i];
  }
  for (size_t j = 0; j < n; ++j) T[m][j] = c[j];
  std::vector<size_t> basis(m);
  for (size_t i = 0; i < m; ++i) basis[i] = n + i;

  for (long iter = 0; iter < 100000; ++iter) {
    size_t pivCol = n + m;
    double best = -1e-9;
    for (size_t j = 0; j < n + m; ++j)
      if (T[m][j] < best) {
        best = T[m][j];
        pivCol = j;
      }
    if (pivCol == n + m) break;  // optimal
    size_t pivRow = m;
    double bestRatio = inf;
    for (size_t i = 0; i < m; ++i) {
      if (T[i][pivCol] > 1e-9) {
        double r = T[i][n + m] / T[i][pivCol];
        if (r < bestRatio - 1e-12) {
          bestRatio = r;
          pivRow = i;
        }
      }
    }
    if (pivRow == m) return {};  // unbounded
    double pv = T[pivRow][pivCol];
    for (auto& v : T[pivRow]) v /= pv;
    for (size_t i = 0; i <= m; ++i) {
      if (i == pivRow) continue;
      double f = T[i][pivCol];
      if (f == 0.0) continue;
      for (size_t j = 0; j <= n + m; ++j) T[i][j] -= f * T[pivRow][j];
    }
    basis[pivRow] = pivCol;
  }
  DenseLpResult res;
  res.optimal = true;
  res.x.assign(n, 0.0);
  for (size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = T[i][n + m];
  for (size_t j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
  return res;
}

}  // namespace oracle
