#pragma once

#include <cstring>
#include <span>
#include <vector>

#include "hypop/error.hpp"

namespace hypop {

// Dense row-major matrix of doubles. Only the handful of operations the
// two-layer network needs; not a general linear-algebra type.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

  double* row(int r) { return data.data() + static_cast<size_t>(r) * cols; }
  const double* row(int r) const { return data.data() + static_cast<size_t>(r) * cols; }

  void set_zero() { std::memset(data.data(), 0, data.size() * sizeof(double)); }

  bool same_shape(const Matrix& other) const {
    return rows == other.rows && cols == other.cols;
  }
};

// C += A * B
void matmul_add(const Matrix& a, const Matrix& b, Matrix& c);
// C += A^T * B
void matmul_add_at(const Matrix& a, const Matrix& b, Matrix& c);
// C += A * B^T
void matmul_add_bt(const Matrix& a, const Matrix& b, Matrix& c);

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw Error(ErrorCode::dimension_mismatch, "matmul shapes");
  Matrix c(a.rows, b.cols);
  matmul_add(a, b, c);
  return c;
}

// Max pairwise Euclidean distance between rows. For matrices with more than
// `max_rows` rows a deterministic stride subsample is used.
double max_pairwise_row_distance(const Matrix& m, int max_rows = 1024);

}  // namespace hypop
