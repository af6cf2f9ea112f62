#include "hypop/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace hypop {

void matmul_add(const Matrix& a, const Matrix& b, Matrix& c) {
  if (a.cols != b.rows || c.rows != a.rows || c.cols != b.cols)
    throw Error(ErrorCode::dimension_mismatch, "matmul_add shapes");
  const int n = a.rows, k = a.cols, m = b.cols;
  for (int i = 0; i < n; ++i) {
    const double* arow = a.row(i);
    double* crow = c.row(i);
    for (int l = 0; l < k; ++l) {
      const double av = arow[l];
      if (av == 0.0) continue;
      const double* brow = b.row(l);
      for (int j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

void matmul_add_at(const Matrix& a, const Matrix& b, Matrix& c) {
  if (a.rows != b.rows || c.rows != a.cols || c.cols != b.cols)
    throw Error(ErrorCode::dimension_mismatch, "matmul_add_at shapes");
  const int n = a.rows, k = a.cols, m = b.cols;
  for (int i = 0; i < n; ++i) {
    const double* arow = a.row(i);
    const double* brow = b.row(i);
    for (int l = 0; l < k; ++l) {
      const double av = arow[l];
      if (av == 0.0) continue;
      double* crow = c.row(l);
      for (int j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

void matmul_add_bt(const Matrix& a, const Matrix& b, Matrix& c) {
  if (a.cols != b.cols || c.rows != a.rows || c.cols != b.rows)
    throw Error(ErrorCode::dimension_mismatch, "matmul_add_bt shapes");
  const int n = a.rows, k = a.cols, m = b.rows;
  for (int i = 0; i < n; ++i) {
    const double* arow = a.row(i);
    double* crow = c.row(i);
    for (int j = 0; j < m; ++j) {
      const double* brow = b.row(j);
      double acc = 0.0;
      for (int l = 0; l < k; ++l) acc += arow[l] * brow[l];
      crow[j] += acc;
    }
  }
}

double max_pairwise_row_distance(const Matrix& m, int max_rows) {
  if (m.rows < 2) return 0.0;
  std::vector<int> rows;
  if (m.rows <= max_rows) {
    rows.resize(m.rows);
    for (int i = 0; i < m.rows; ++i) rows[i] = i;
  } else {
    rows.resize(max_rows);
    for (int i = 0; i < max_rows; ++i)
      rows[i] = static_cast<int>(static_cast<long long>(i) * m.rows / max_rows);
  }
  double best = 0.0;
  for (size_t ai = 0; ai < rows.size(); ++ai) {
    const double* ra = m.row(rows[ai]);
    for (size_t bi = ai + 1; bi < rows.size(); ++bi) {
      const double* rb = m.row(rows[bi]);
      double d2 = 0.0;
      for (int c = 0; c < m.cols; ++c) {
        double diff = ra[c] - rb[c];
        d2 += diff * diff;
      }
      best = std::max(best, d2);
    }
  }
  return std::sqrt(best);
}

}  // namespace hypop
