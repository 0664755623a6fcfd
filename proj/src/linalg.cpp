#include "jme/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace jme::linalg {

LowerTriangular LowerTriangular::from_dense(Mat m) {
  if (m.rows != m.cols || m.rows == 0) {
    throw std::invalid_argument("LowerTriangular: matrix must be square, n >= 1");
  }
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = i + 1; j < m.cols; ++j) {
      if (m(i, j) != 0.0) {
        throw std::invalid_argument("LowerTriangular: nonzero entry above diagonal");
      }
    }
  }
  LowerTriangular out(m.rows);
  out.mat_ = std::move(m);
  return out;
}

LowerTriangular LowerTriangular::identity(std::size_t n) {
  LowerTriangular out(n);
  for (std::size_t i = 0; i < n; ++i) out.mat_(i, i) = 1.0;
  return out;
}

double& LowerTriangular::at(std::size_t i, std::size_t j) {
  if (j > i) throw std::invalid_argument("LowerTriangular::at: above diagonal");
  return mat_(i, j);
}

LowerTriangular ToeplitzCoeffs::materialize() const {
  const std::size_t n = coeffs.size();
  LowerTriangular out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) out.at(i, j) = coeffs[i - j];
  }
  return out;
}

DataMatrix DataMatrix::checked(Mat rows, double zeta) {
  if (zeta <= 0) throw std::invalid_argument("DataMatrix: zeta must be positive");
  for (std::size_t i = 0; i < rows.rows; ++i) {
    const double nrm = norm2(rows.row(i));
    if (nrm > zeta * (1.0 + 1e-12)) {
      throw std::invalid_argument("DataMatrix: row " + std::to_string(i) +
                                  " exceeds norm bound");
    }
  }
  return DataMatrix(std::move(rows), zeta);
}

DataMatrix DataMatrix::clipped(Mat rows, double zeta) {
  if (zeta <= 0) throw std::invalid_argument("DataMatrix: zeta must be positive");
  for (std::size_t i = 0; i < rows.rows; ++i) {
    auto r = rows.row(i);
    const double nrm = norm2(r);
    if (nrm > zeta) {
      const double scale = zeta / nrm;
      for (double& v : r) v *= scale;
    }
  }
  return DataMatrix(std::move(rows), zeta);
}

Mat matmul_lower(const LowerTriangular& a, const Mat& x) {
  const std::size_t n = a.dim();
  if (x.rows != n) throw std::invalid_argument("matmul_lower: shape mismatch");
  Mat out(n, x.cols);
  for (std::size_t t = 0; t < n; ++t) {
    auto arow = a.row(t);
    double* dst = out.row(t).data();
    for (std::size_t i = 0; i <= t; ++i) {
      const double w = arow[i];
      if (w == 0.0) continue;
      const double* src = x.row(i).data();
      for (std::size_t j = 0; j < x.cols; ++j) dst[j] += w * src[j];
    }
  }
  return out;
}

void solve_lower_inplace(const LowerTriangular& c, Mat& b) {
  const std::size_t n = c.dim();
  if (b.rows != n) throw std::invalid_argument("solve_lower: shape mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (c(i, i) == 0.0) {
      throw std::invalid_argument("solve_lower: zero diagonal at row " +
                                  std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto crow = c.row(i);
    double* bi = b.row(i).data();
    for (std::size_t j = 0; j < i; ++j) {
      const double w = crow[j];
      if (w == 0.0) continue;
      const double* bj = b.row(j).data();
      for (std::size_t k = 0; k < b.cols; ++k) bi[k] -= w * bj[k];
    }
    const double inv = 1.0 / crow[i];
    for (std::size_t k = 0; k < b.cols; ++k) bi[k] *= inv;
  }
}

Mat solve_lower(const LowerTriangular& c, const Mat& b) {
  Mat out = b;
  solve_lower_inplace(c, out);
  return out;
}

Mat right_divide_lower(const Mat& a, const LowerTriangular& c) {
  const std::size_t n = c.dim();
  if (a.cols != n) throw std::invalid_argument("right_divide_lower: shape mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (c(i, i) == 0.0) {
      throw std::invalid_argument("right_divide_lower: singular C");
    }
  }
  // Row r of A C^{-1} solves y C = a_r, i.e. back substitution from the last
  // column: y_j = (a_j - sum_{i>j} y_i C(i,j)) / C(j,j).
  Mat out(a.rows, n);
  for (std::size_t r = 0; r < a.rows; ++r) {
    const double* arow = a.row(r).data();
    double* y = out.row(r).data();
    for (std::size_t jj = n; jj-- > 0;) {
      double acc = arow[jj];
      for (std::size_t i = jj + 1; i < n; ++i) acc -= y[i] * c(i, jj);
      y[jj] = acc / c(jj, jj);
    }
  }
  return out;
}

Mat invert_lower(const LowerTriangular& c) {
  const std::size_t n = c.dim();
  Mat eye(n, n);
  for (std::size_t i = 0; i < n; ++i) eye(i, i) = 1.0;
  solve_lower_inplace(c, eye);
  return eye;
}

std::vector<double> column_norms(const LowerTriangular& c) {
  const std::size_t n = c.dim();
  std::vector<double> sums(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = c(i, j);
      sums[j] += v * v;
    }
  }
  for (double& s : sums) s = std::sqrt(s);
  return sums;
}

double max_column_norm(const LowerTriangular& c) {
  double best = 0.0;
  for (double v : column_norms(c)) best = std::max(best, v);
  return best;
}

ToeplitzCoeffs toeplitz_sqrt(const ToeplitzCoeffs& a) {
  const std::size_t n = a.dim();
  if (n == 0 || a.coeffs[0] <= 0.0) {
    throw std::invalid_argument("toeplitz_sqrt: leading coefficient must be positive");
  }
  ToeplitzCoeffs c;
  c.coeffs.assign(n, 0.0);
  c.coeffs[0] = std::sqrt(a.coeffs[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double acc = a.coeffs[k];
    for (std::size_t j = 1; j < k; ++j) acc -= c.coeffs[j] * c.coeffs[k - j];
    c.coeffs[k] = acc / (2.0 * c.coeffs[0]);
  }
  return c;
}

void face_split_row(std::span<const double> x, std::span<double> out) {
  const std::size_t d = x.size();
  for (std::size_t i = 0; i < d; ++i) {
    const double xi = x[i];
    for (std::size_t j = 0; j < d; ++j) out[i * d + j] = xi * x[j];
  }
}

Mat face_split(const Mat& x) {
  Mat out(x.rows, x.cols * x.cols);
  for (std::size_t i = 0; i < x.rows; ++i) face_split_row(x.row(i), out.row(i));
  return out;
}

void square_row(std::span<const double> x, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * x[i];
}

Mat square_rows(const Mat& x) {
  Mat out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.rows; ++i) square_row(x.row(i), out.row(i));
  return out;
}

double frobenius_sq(const Mat& m) {
  double acc = 0.0;
  for (double v : m.data) acc += v * v;
  return acc;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

double norm2(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc);
}

}  // namespace jme::linalg
