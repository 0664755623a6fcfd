#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jme/calibration.hpp"
#include "jme/linalg.hpp"
#include "jme/sensitivity.hpp"
#include "jme/workload.hpp"

namespace jme::mechanisms {

enum class Method { kJme, kLambdaJme, kIme, kCs, kPp };

Method parse_method(std::string_view text, bool* pp_debias);
std::string to_string(Method m, bool pp_debias);

enum class SecondMomentForm { kFullMatrix, kDiagonalOnly };

struct MechanismConfig {
  Method method = Method::kJme;
  bool pp_debias = false;
  double lambda = 0.0;  // lambda-JME only; JME fixes lambda = lambda* itself
  double alpha = 0.5;   // IME budget split
  double tau = 1.0;     // CS second-moment rescaling
  workload::WorkloadSpec a1 = workload::WorkloadSpec::prefix_sum();
  workload::WorkloadSpec a2 = workload::WorkloadSpec::prefix_sum();
  workload::Factorization factorization = workload::Factorization::kIdentity;
  std::size_t n = 0;
  std::size_t d = 0;
  calibration::PrivacyParams privacy = calibration::PrivacyParams::from_sigma(0.0);
  SecondMomentForm form = SecondMomentForm::kFullMatrix;
  bool clip_inputs = false;
  bool symmetrize = false;
  std::uint64_t seed = 0;
};

struct MomentEstimate {
  std::size_t t = 0;               // 1-based step
  std::vector<double> y_hat;       // length d
  std::vector<double> s_hat;       // length d^2 (row-major) or d (diagonal form)
};

// Everything that does not depend on the noise draw: workload matrices,
// shapings, the scaling lambda, per-stream noise levels. Built once and
// shared across trials.
class StreamSetup {
 public:
  static std::shared_ptr<const StreamSetup> build(const MechanismConfig& config);
  // Same, but with explicitly supplied matrices (e.g. non-Table workloads).
  static std::shared_ptr<const StreamSetup> build_with_matrices(
      const MechanismConfig& config, linalg::LowerTriangular a1,
      linalg::LowerTriangular a2, workload::NoiseShaping c1,
      workload::NoiseShaping c2);

  const MechanismConfig& config() const { return config_; }
  const linalg::LowerTriangular& a1() const { return a1_; }
  const linalg::LowerTriangular& a2() const { return a2_; }
  const workload::NoiseShaping& c1() const { return c1_; }
  const workload::NoiseShaping& c2() const { return c2_; }
  std::size_t second_width() const { return second_width_; }
  double lambda() const { return lambda_; }

  // Per-entry stddev of the raw Gaussian matrices Z1 / Z2.
  double z1_stddev() const { return z1_stddev_; }
  double z2_stddev() const { return z2_stddev_; }
  // Multiplier applied to the shaped second-moment noise (lambda^{-1/2} for
  // JME, 1/sqrt(tau) for CS, 1 otherwise).
  double second_noise_scale() const { return second_noise_scale_; }

  // Diagonal of (C1 C1^T)^{-1}; used by the post-processing bias.
  const std::vector<double>& gram_inverse_diag() const { return q_diag_; }
  // Precomputed output-level debias values per step (PP with debiasing).
  const std::vector<double>& output_bias() const { return output_bias_; }

 private:
  friend class MomentEstimator;
  MechanismConfig config_;
  linalg::LowerTriangular a1_{1}, a2_{1};
  workload::NoiseShaping c1_ = workload::NoiseShaping::identity(1);
  workload::NoiseShaping c2_ = workload::NoiseShaping::identity(1);
  std::size_t second_width_ = 0;
  double lambda_ = 0.0;
  double z1_stddev_ = 0.0;
  double z2_stddev_ = 0.0;
  double second_noise_scale_ = 1.0;
  std::vector<double> q_diag_;
  std::vector<double> output_bias_;
};

// Streaming state machine: consumes x_t, emits (Y_hat_t, S_hat_t). The
// shaped noise couples all steps through C^{-1}, so it is drawn for the full
// horizon at construction and consumed row by row.
class MomentEstimator {
 public:
  MomentEstimator(std::shared_ptr<const StreamSetup> setup, std::uint64_t trial_seed);

  MomentEstimate step(std::span<const double> x);
  bool exhausted() const { return t_ == setup_->config_.n; }
  std::size_t steps_taken() const { return t_; }

 private:
  std::shared_ptr<const StreamSetup> setup_;
  std::size_t t_ = 0;
  linalg::Mat noise_first_;    // shaped rows added to x_t
  linalg::Mat noise_second_;   // shaped rows added to the second-moment rows
  linalg::Mat hat_first_;      // accumulated privatized rows
  linalg::Mat hat_second_;
};

// Output-level bias of the post-processing second moment at step t (1-based):
//   noise_std^2 * sum_k A2[t,k] * Q_kk,   Q = (C1 C1^T)^{-1},
// replicated over the diagonal. noise_std is the per-entry stddev of the raw
// noise matrix Z (that is sigma_{eps,delta} * sens).
double pp_bias_diagonal_value(const linalg::LowerTriangular& a2,
                              const workload::NoiseShaping& c1, double noise_std,
                              std::size_t t);

// Convenience wrappers.
std::vector<MomentEstimate> run_stream(std::shared_ptr<const StreamSetup> setup,
                                       const linalg::DataMatrix& data,
                                       std::uint64_t trial_seed);
std::vector<MomentEstimate> run_stream(const MechanismConfig& config,
                                       const linalg::DataMatrix& data);

// Exact (noiseless) moments of a stream for the given workloads.
struct ExactMoments {
  linalg::Mat first;   // n x d
  linalg::Mat second;  // n x d^2 or n x d
};
ExactMoments exact_moments(const linalg::LowerTriangular& a1,
                           const linalg::LowerTriangular& a2, const linalg::Mat& x,
                           SecondMomentForm form);

}  // namespace jme::mechanisms
