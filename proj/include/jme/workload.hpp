#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "jme/linalg.hpp"

namespace jme::workload {

enum class Kind { kPrefixSum, kAverage, kExponential, kSlidingWindow };

// Workload selector. CLI form: "prefix | average | exp:<beta> | window:<k>".
struct WorkloadSpec {
  Kind kind = Kind::kPrefixSum;
  double beta = 0.0;        // exponential decay, in (0, 1)
  std::size_t window = 0;   // sliding window size, >= 1

  static WorkloadSpec prefix_sum() { return {Kind::kPrefixSum, 0.0, 0}; }
  static WorkloadSpec average() { return {Kind::kAverage, 0.0, 0}; }
  static WorkloadSpec exponential(double beta);
  static WorkloadSpec sliding_window(std::size_t k);

  static WorkloadSpec parse(std::string_view text);
  std::string to_string() const;
};

// Materializes the n x n coefficient matrix:
//   prefix       1{i <= t}
//   exponential  beta^{t-i} 1{i <= t}
//   average      (1/t) 1{i <= t}
//   window       (1/k) 1{t-k < i <= t}
// (1-based t, i as in the row/column indices plus one).
linalg::LowerTriangular build_workload(const WorkloadSpec& spec, std::size_t n);

enum class Factorization { kIdentity, kSquareRoot };

Factorization parse_factorization(std::string_view text);
std::string to_string(Factorization f);

// Invertible lower-triangular noise-shaping matrix with cached column norms.
// Construction rejects matrices whose column norms increase anywhere, since
// the sensitivity analysis requires non-increasing columns. C^{-1} is never
// materialized here; shaping applies it through a triangular solve.
class NoiseShaping {
 public:
  static NoiseShaping identity(std::size_t n);
  static NoiseShaping from_matrix(linalg::LowerTriangular c);
  static NoiseShaping from_toeplitz(const linalg::ToeplitzCoeffs& c);

  std::size_t dim() const { return matrix_.dim(); }
  bool is_identity() const { return is_identity_; }
  const linalg::LowerTriangular& matrix() const { return matrix_; }
  const std::vector<double>& column_norms() const { return column_norms_; }
  double max_column_norm() const { return max_column_norm_; }

  // Z <- C^{-1} Z (no-op for the identity).
  void apply_inverse_inplace(linalg::Mat& z) const;

 private:
  NoiseShaping(linalg::LowerTriangular c, bool is_identity);

  linalg::LowerTriangular matrix_;
  std::vector<double> column_norms_;
  double max_column_norm_ = 0.0;
  bool is_identity_ = false;
};

// Builds the shaping matrix paired with a workload. Identity returns I.
// SquareRoot returns the Toeplitz square root of the workload's Toeplitz
// generator. Average and SlidingWindow are not Toeplitz themselves; for
// those the underlying *sum* matrix (prefix sum, resp. unnormalized window
// sum) is factored and the per-row scaling stays on the workload side of
// the factorization.
NoiseShaping build_noise_shaping(Factorization f, const WorkloadSpec& spec,
                                 std::size_t n);

}  // namespace jme::workload
