#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "jme/linalg.hpp"
#include "jme/rng.hpp"

using namespace jme;
using linalg::LowerTriangular;
using linalg::Mat;
using linalg::ToeplitzCoeffs;

namespace {

LowerTriangular prefix_matrix(std::size_t n) {
  LowerTriangular a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) a.at(i, j) = 1.0;
  return a;
}

Mat column(std::initializer_list<double> values) {
  Mat m(values.size(), 1);
  std::size_t i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

}  // namespace

TEST_CASE("matmul_lower identity leaves input unchanged") {
  Mat x(3, 2);
  x(0, 0) = 1; x(0, 1) = -2; x(1, 0) = 0.5; x(2, 1) = 7;
  const Mat y = linalg::matmul_lower(LowerTriangular::identity(3), x);
  for (std::size_t i = 0; i < x.data.size(); ++i) CHECK(y.data[i] == x.data[i]);
}

TEST_CASE("matmul_lower prefix sum is the running sum") {
  const Mat y = linalg::matmul_lower(prefix_matrix(3), column({1, 2, 3}));
  CHECK(y(0, 0) == doctest::Approx(1));
  CHECK(y(1, 0) == doctest::Approx(3));
  CHECK(y(2, 0) == doctest::Approx(6));
}

TEST_CASE("matmul_lower average is the running mean") {
  LowerTriangular v(3);
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t i = 0; i <= t; ++i) v.at(t, i) = 1.0 / double(t + 1);
  const Mat y = linalg::matmul_lower(v, column({1, 2, 3}));
  CHECK(y(0, 0) == doctest::Approx(1));
  CHECK(y(1, 0) == doctest::Approx(1.5));
  CHECK(y(2, 0) == doctest::Approx(2));
}

TEST_CASE("solve_lower basic cases") {
  const Mat b = column({4, 6});
  LowerTriangular two(2);
  two.at(0, 0) = 2; two.at(1, 1) = 2;
  const Mat x = linalg::solve_lower(two, b);
  CHECK(x(0, 0) == doctest::Approx(2));
  CHECK(x(1, 0) == doctest::Approx(3));

  const Mat same = linalg::solve_lower(LowerTriangular::identity(2), b);
  CHECK(same(0, 0) == 4);
  CHECK(same(1, 0) == 6);
}

TEST_CASE("solve_lower rejects singular matrices") {
  LowerTriangular c(2);
  c.at(0, 0) = 1;  // c(1,1) stays zero
  CHECK_THROWS_AS(linalg::solve_lower(c, Mat(2, 1)), std::invalid_argument);
}

TEST_CASE("solve_lower residual against sqrt factor of the prefix matrix") {
  ToeplitzCoeffs ones;
  ones.coeffs.assign(3, 1.0);
  const LowerTriangular c = linalg::toeplitz_sqrt(ones).materialize();
  Mat b(3, 1);
  b(0, 0) = 1; b(1, 0) = 1; b(2, 0) = 1;  // a column of the prefix matrix
  const Mat x = linalg::solve_lower(c, b);
  const Mat back = linalg::matmul_lower(c, x);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back(i, 0) == doctest::Approx(b(i, 0)).epsilon(1e-10));
}

TEST_CASE("solve after matmul round-trips") {
  rng::Engine eng(7);
  LowerTriangular c(5);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < i; ++j) c.at(i, j) = eng.next_normal();
    c.at(i, i) = 2.0 + eng.next_uniform();
  }
  Mat x(5, 3);
  for (double& v : x.data) v = eng.next_normal();
  const Mat b = linalg::matmul_lower(c, x);
  const Mat x2 = linalg::solve_lower(c, b);
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    CHECK(x2.data[i] == doctest::Approx(x.data[i]).epsilon(1e-8));
  }
}

TEST_CASE("column norms of standard matrices") {
  const auto id = linalg::column_norms(LowerTriangular::identity(3));
  for (double v : id) CHECK(v == doctest::Approx(1.0));

  const auto pre = linalg::column_norms(prefix_matrix(3));
  CHECK(pre[0] == doctest::Approx(std::sqrt(3.0)));
  CHECK(pre[1] == doctest::Approx(std::sqrt(2.0)));
  CHECK(pre[2] == doctest::Approx(1.0));
  CHECK(linalg::max_column_norm(prefix_matrix(3)) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("toeplitz_sqrt of the identity is the identity") {
  ToeplitzCoeffs a;
  a.coeffs = {1, 0, 0, 0};
  const auto c = linalg::toeplitz_sqrt(a);
  CHECK(c.coeffs[0] == doctest::Approx(1));
  for (std::size_t k = 1; k < 4; ++k) CHECK(c.coeffs[k] == doctest::Approx(0));
}

TEST_CASE("toeplitz_sqrt of all ones gives the known coefficients") {
  ToeplitzCoeffs a;
  a.coeffs.assign(4, 1.0);
  const auto c = linalg::toeplitz_sqrt(a);
  CHECK(c.coeffs[0] == doctest::Approx(1.0));
  CHECK(c.coeffs[1] == doctest::Approx(0.5));
  CHECK(c.coeffs[2] == doctest::Approx(0.375));
  CHECK(c.coeffs[3] == doctest::Approx(0.3125));

  // First-column norm of the materialized factor.
  const auto norms = linalg::column_norms(c.materialize());
  CHECK(norms[0] == doctest::Approx(std::sqrt(381.0 / 256.0)).epsilon(1e-12));
  CHECK(norms[0] == doctest::Approx(1.21995).epsilon(1e-4));

  // C * C reproduces the all-ones lower-triangular matrix.
  const auto cm = c.materialize();
  const Mat sq = linalg::matmul_lower(cm, cm.dense());
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j <= i; ++j) CHECK(sq(i, j) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("toeplitz_sqrt round-trips the exponential generator") {
  const double beta = 0.9;
  ToeplitzCoeffs a;
  for (std::size_t k = 0; k < 4; ++k) a.coeffs.push_back(std::pow(beta, double(k)));
  const auto cm = linalg::toeplitz_sqrt(a).materialize();
  const Mat sq = linalg::matmul_lower(cm, cm.dense());
  const auto am = a.materialize();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      CHECK(sq(i, j) == doctest::Approx(am(i, j)).epsilon(1e-10));
}

TEST_CASE("toeplitz_sqrt squared reproduces the input up to n = 512") {
  ToeplitzCoeffs a;
  a.coeffs.assign(512, 1.0);
  const auto cm = linalg::toeplitz_sqrt(a).materialize();
  const Mat sq = linalg::matmul_lower(cm, cm.dense());
  double worst = 0.0;
  for (std::size_t i = 0; i < 512; ++i)
    for (std::size_t j = 0; j <= i; ++j) worst = std::max(worst, std::abs(sq(i, j) - 1.0));
  CHECK(worst < 1e-10);
}

TEST_CASE("toeplitz_sqrt rejects non-positive leading coefficient") {
  ToeplitzCoeffs a;
  a.coeffs = {0.0, 1.0};
  CHECK_THROWS_AS(linalg::toeplitz_sqrt(a), std::invalid_argument);
}

TEST_CASE("face_split_row on small vectors") {
  double out[4];
  const double e1[2] = {1, 0};
  linalg::face_split_row(e1, out);
  CHECK(out[0] == 1); CHECK(out[1] == 0); CHECK(out[2] == 0); CHECK(out[3] == 0);

  const double v[2] = {1, 2};
  linalg::face_split_row(v, out);
  CHECK(out[0] == 1); CHECK(out[1] == 2); CHECK(out[2] == 2); CHECK(out[3] == 4);
}

TEST_CASE("face_split_row norm equals squared vector norm") {
  rng::Engine eng(11);
  for (int rep = 0; rep < 100; ++rep) {
    double x[3], out[9];
    for (double& v : x) v = eng.next_normal();
    linalg::face_split_row(x, out);
    const double n2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    CHECK(linalg::norm2(out) == doctest::Approx(n2).epsilon(1e-12));
  }
}

TEST_CASE("kronecker difference identity") {
  // |x(x)x - y(x)y|_F^2 = |x|^4 + |y|^4 - 2 <x,y>^2
  rng::Engine eng(13);
  for (int rep = 0; rep < 100; ++rep) {
    double x[3], y[3], ox[9], oy[9];
    for (double& v : x) v = eng.next_normal();
    for (double& v : y) v = eng.next_normal();
    linalg::face_split_row(x, ox);
    linalg::face_split_row(y, oy);
    const double lhs = linalg::squared_distance(ox, oy);
    double nx = 0, ny = 0, ip = 0;
    for (int i = 0; i < 3; ++i) {
      nx += x[i] * x[i];
      ny += y[i] * y[i];
      ip += x[i] * y[i];
    }
    const double rhs = nx * nx + ny * ny - 2 * ip * ip;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("square_row is the diagonal of face_split_row") {
  const double x[2] = {1, 2};
  double sq[2], full[4];
  linalg::square_row(x, sq);
  linalg::face_split_row(x, full);
  CHECK(sq[0] == 1); CHECK(sq[1] == 4);
  CHECK(sq[0] == full[0]);
  CHECK(sq[1] == full[3]);
}

TEST_CASE("DataMatrix norm enforcement and clipping") {
  Mat rows(2, 2);
  rows(0, 0) = 3; rows(0, 1) = 4;  // norm 5
  rows(1, 0) = 0.1;
  CHECK_THROWS_AS(linalg::DataMatrix::checked(rows, 1.0), std::invalid_argument);
  const auto clipped = linalg::DataMatrix::clipped(rows, 1.0);
  CHECK(linalg::norm2(clipped.row(0)) == doctest::Approx(1.0));
  CHECK(clipped.row(1)[0] == doctest::Approx(0.1));  // short rows untouched
}

TEST_CASE("right_divide_lower matches multiply by explicit inverse") {
  rng::Engine eng(17);
  LowerTriangular c(6);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < i; ++j) c.at(i, j) = 0.3 * eng.next_normal();
    c.at(i, i) = 1.5 + eng.next_uniform();
  }
  Mat a(4, 6);
  for (double& v : a.data) v = eng.next_normal();
  const Mat direct = linalg::right_divide_lower(a, c);
  const Mat inv = linalg::invert_lower(c);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t j = 0; j < 6; ++j) {
      double acc = 0;
      for (std::size_t k = 0; k < 6; ++k) acc += a(r, k) * inv(k, j);
      CHECK(direct(r, j) == doctest::Approx(acc).epsilon(1e-10));
    }
  }
}
