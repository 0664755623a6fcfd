#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace jme::linalg {

// Dense row-major matrix. All experiment sizes are a few thousand rows at
// most, so no attempt is made at sparse or blocked storage.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * cols, cols};
  }
};

// n x n lower-triangular matrix; entries above the diagonal are identically
// zero by construction.
class LowerTriangular {
 public:
  explicit LowerTriangular(std::size_t n) : mat_(n, n) {}

  // Validates the upper triangle is exactly zero.
  static LowerTriangular from_dense(Mat m);

  static LowerTriangular identity(std::size_t n);

  std::size_t dim() const { return mat_.rows; }
  double operator()(std::size_t i, std::size_t j) const { return mat_(i, j); }
  double& at(std::size_t i, std::size_t j);
  const Mat& dense() const { return mat_; }
  std::span<const double> row(std::size_t i) const { return mat_.row(i); }

 private:
  Mat mat_;
};

// Lower-triangular Toeplitz matrix given by its first column c_0..c_{n-1};
// entry (i, j) = c_{i-j} for i >= j.
struct ToeplitzCoeffs {
  std::vector<double> coeffs;

  std::size_t dim() const { return coeffs.size(); }
  LowerTriangular materialize() const;
};

// Row-stacked data stream with an enforced per-row l2 bound.
class DataMatrix {
 public:
  // Throws if any row exceeds the bound (beyond a small fp tolerance).
  static DataMatrix checked(Mat rows, double zeta);
  // Rescales offending rows onto the ball of radius zeta.
  static DataMatrix clipped(Mat rows, double zeta);

  std::size_t steps() const { return rows_.rows; }
  std::size_t dim() const { return rows_.cols; }
  double zeta() const { return zeta_; }
  const Mat& mat() const { return rows_; }
  std::span<const double> row(std::size_t i) const { return rows_.row(i); }

 private:
  DataMatrix(Mat rows, double zeta) : rows_(std::move(rows)), zeta_(zeta) {}
  Mat rows_;
  double zeta_;
};

// Product A * X exploiting triangularity, O(n^2 d).
Mat matmul_lower(const LowerTriangular& a, const Mat& x);

// Solves C * X = B by forward substitution; throws on zero diagonal.
Mat solve_lower(const LowerTriangular& c, const Mat& b);
void solve_lower_inplace(const LowerTriangular& c, Mat& b);

// Computes A * C^{-1} (back substitution against C^T row by row).
Mat right_divide_lower(const Mat& a, const LowerTriangular& c);

// Materializes C^{-1} (n solves). Used by closed-form error evaluation, not
// by the noise-shaping path.
Mat invert_lower(const LowerTriangular& c);

// l2 norm of every column; the maximum is the |.|_{1->2} norm.
std::vector<double> column_norms(const LowerTriangular& c);
double max_column_norm(const LowerTriangular& c);

// Lower-triangular Toeplitz square root: returns c with (c * c)_k = a_k for
// all k < n (discrete convolution), so the materialized factors satisfy
// C * C = A. Requires a_0 > 0.
ToeplitzCoeffs toeplitz_sqrt(const ToeplitzCoeffs& a);

// Row-wise Kronecker square: out[(i*d)+j] = x_i * x_j, the vectorization of
// x x^T in row-major order.
void face_split_row(std::span<const double> x, std::span<double> out);
Mat face_split(const Mat& x);

// Elementwise square, the diagonal of face_split_row.
void square_row(std::span<const double> x, std::span<double> out);
Mat square_rows(const Mat& x);

double frobenius_sq(const Mat& m);
double squared_distance(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> x);

}  // namespace jme::linalg
