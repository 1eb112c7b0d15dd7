#include "divclus/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace divclus {

namespace {

// Tableau with rows 0..m-1 the constraints and row m the objective.
// basis[i] is the variable basic in row i.
struct Tableau {
  std::vector<std::vector<double>> a;
  std::vector<int> basis;
  int m, n;  // constraint rows, total columns (excluding rhs)

  double& rhs(int i) { return a[i][n]; }
  double& obj(int j) { return a[m][j]; }

  void pivot(int row, int col) {
    const double p = a[row][col];
    for (int j = 0; j <= n; ++j) a[row][j] /= p;
    for (int i = 0; i <= m; ++i) {
      if (i == row) continue;
      const double f = a[i][col];
      if (f == 0) continue;
      for (int j = 0; j <= n; ++j) a[i][j] -= f * a[row][j];
    }
    basis[row] = col;
  }

  // Bland's rule: entering = lowest-index negative reduced cost,
  // leaving = lowest ratio then lowest basis index.
  LpStatus iterate(double tol, int col_limit) {
    for (;;) {
      int col = -1;
      for (int j = 0; j < col_limit; ++j) {
        if (a[m][j] < -tol) {
          col = j;
          break;
        }
      }
      if (col < 0) return LpStatus::kOptimal;
      int row = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (a[i][col] > tol) {
          const double ratio = a[i][n] / a[i][col];
          if (ratio < best - tol || (ratio < best + tol && (row < 0 || basis[i] < basis[row]))) {
            best = ratio;
            row = i;
          }
        }
      }
      if (row < 0) return LpStatus::kUnbounded;
      pivot(row, col);
    }
  }
};

}  // namespace

LpResult simplex_solve(const std::vector<std::vector<double>>& A,
                       const std::vector<double>& b,
                       const std::vector<int>& row_sense,
                       const std::vector<double>& c, double tol) {
  const int m = static_cast<int>(A.size());
  const int n = static_cast<int>(c.size());
  if (static_cast<int>(b.size()) != m || static_cast<int>(row_sense.size()) != m)
    throw std::invalid_argument("simplex: inconsistent sizes");

  // Columns: n structural, then one slack/surplus per inequality row,
  // then one artificial per row that needs it.
  int n_slack = 0;
  for (int s : row_sense)
    if (s != 0) ++n_slack;

  std::vector<std::vector<double>> rows(m);
  std::vector<int> slack_col(m, -1);
  int col = n;
  for (int i = 0; i < m; ++i)
    if (row_sense[i] != 0) slack_col[i] = col++;
  const int total_before_art = col;

  std::vector<int> art_col(m, -1);
  std::vector<bool> needs_art(m, false);
  for (int i = 0; i < m; ++i) {
    double bi = b[i];
    int sense = row_sense[i];
    // Normalize to nonnegative rhs.
    bool flip = bi < 0;
    if (flip) sense = -sense;
    // >= rows get a surplus (-1) and an artificial; <= rows a slack basic.
    needs_art[i] = (sense >= 0);
    if (needs_art[i]) art_col[i] = col++;
  }
  const int n_total = col;

  Tableau t;
  t.m = m;
  t.n = n_total;
  t.a.assign(m + 1, std::vector<double>(n_total + 1, 0.0));
  t.basis.assign(m, -1);

  for (int i = 0; i < m; ++i) {
    const bool flip = b[i] < 0;
    const double sgn = flip ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) t.a[i][j] = sgn * A[i][j];
    t.rhs(i) = sgn * b[i];
    int sense = row_sense[i];
    if (flip) sense = -sense;
    if (slack_col[i] >= 0) t.a[i][slack_col[i]] = (sense < 0) ? 1.0 : -1.0;
    if (needs_art[i]) {
      t.a[i][art_col[i]] = 1.0;
      t.basis[i] = art_col[i];
    } else {
      t.basis[i] = slack_col[i];
    }
  }

  // Phase 1: minimize the sum of artificials (canonicalized against the
  // artificial basis).
  for (int i = 0; i < m; ++i)
    if (art_col[i] >= 0) t.a[m][art_col[i]] = 1.0;
  for (int i = 0; i < m; ++i) {
    if (!needs_art[i]) continue;
    for (int j = 0; j <= n_total; ++j) t.a[m][j] -= t.a[i][j];
  }
  if (t.iterate(tol, n_total) == LpStatus::kUnbounded)
    throw std::runtime_error("simplex: phase-1 unbounded");
  if (t.a[m][n_total] < -1e-7) return {LpStatus::kInfeasible, {}, 0.0};

  // Drive any artificial still basic (at value zero) out of the basis;
  // rows with no structural pivot are redundant and stay put at zero.
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < total_before_art) continue;
    int piv = -1;
    for (int j = 0; j < total_before_art; ++j)
      if (std::abs(t.a[i][j]) > tol) {
        piv = j;
        break;
      }
    if (piv >= 0) t.pivot(i, piv);
  }

  // Phase 2: real objective; artificial columns may no longer enter.
  for (int j = 0; j <= n_total; ++j) t.a[m][j] = 0.0;
  for (int j = 0; j < n; ++j) t.a[m][j] = c[j];
  for (int i = 0; i < m; ++i) {
    const int bj = t.basis[i];
    if (bj < n && t.a[m][bj] != 0) {
      const double f = t.a[m][bj];
      for (int j = 0; j <= n_total; ++j) t.a[m][j] -= f * t.a[i][j];
    }
  }
  if (t.iterate(tol, total_before_art) == LpStatus::kUnbounded)
    return {LpStatus::kUnbounded, {}, 0.0};

  LpResult res;
  res.status = LpStatus::kOptimal;
  res.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (t.basis[i] < n) res.x[t.basis[i]] = t.rhs(i);
  res.objective = 0;
  for (int j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
  return res;
}

}  // namespace divclus
