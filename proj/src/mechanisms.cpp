#include "jme/mechanisms.hpp"

#include <cmath>
#include <stdexcept>

#include "jme/rng.hpp"

namespace jme::mechanisms {

namespace {

constexpr std::uint64_t kStreamFirst = 1;
constexpr std::uint64_t kStreamSecond = 2;

void fill_gaussian(linalg::Mat& m, double stddev, std::uint64_t seed) {
  if (stddev == 0.0) return;
  rng::Engine eng(seed);
  eng.fill_normal(m.data.data(), m.data.size(), stddev);
}

}  // namespace

Method parse_method(std::string_view text, bool* pp_debias) {
  *pp_debias = false;
  if (text == "jme") return Method::kJme;
  if (text == "lambda-jme") return Method::kLambdaJme;
  if (text == "ime") return Method::kIme;
  if (text == "cs") return Method::kCs;
  if (text == "pp") return Method::kPp;
  if (text == "pp-debiased") {
    *pp_debias = true;
    return Method::kPp;
  }
  throw std::invalid_argument(
      "unknown method '" + std::string(text) +
      "' (expected jme | lambda-jme | ime | cs | pp | pp-debiased)");
}

std::string to_string(Method m, bool pp_debias) {
  switch (m) {
    case Method::kJme: return "jme";
    case Method::kLambdaJme: return "lambda-jme";
    case Method::kIme: return "ime";
    case Method::kCs: return "cs";
    case Method::kPp: return pp_debias ? "pp-debiased" : "pp";
  }
  return "?";
}

std::shared_ptr<const StreamSetup> StreamSetup::build(const MechanismConfig& config) {
  auto a1 = workload::build_workload(config.a1, config.n);
  auto a2 = workload::build_workload(config.a2, config.n);
  auto c1 = workload::build_noise_shaping(config.factorization, config.a1, config.n);
  auto c2 = workload::build_noise_shaping(config.factorization, config.a2, config.n);
  return build_with_matrices(config, std::move(a1), std::move(a2), std::move(c1),
                             std::move(c2));
}

std::shared_ptr<const StreamSetup> StreamSetup::build_with_matrices(
    const MechanismConfig& config, linalg::LowerTriangular a1,
    linalg::LowerTriangular a2, workload::NoiseShaping c1,
    workload::NoiseShaping c2) {
  if (config.n == 0 || config.d == 0) {
    throw std::invalid_argument("MechanismConfig: n and d must be positive");
  }
  if (a1.dim() != config.n || a2.dim() != config.n || c1.dim() != config.n ||
      c2.dim() != config.n) {
    throw std::invalid_argument("MechanismConfig: matrix dimensions must equal n");
  }
  auto setup = std::make_shared<StreamSetup>();
  setup->config_ = config;
  setup->a1_ = std::move(a1);
  setup->a2_ = std::move(a2);
  setup->c1_ = std::move(c1);
  setup->c2_ = std::move(c2);

  const std::size_t d = config.d;
  setup->second_width_ =
      config.form == SecondMomentForm::kFullMatrix ? d * d : d;

  const double sigma = config.privacy.sigma;
  const double zeta = config.privacy.zeta;
  const double c1_norm = setup->c1_.max_column_norm();
  const double c2_norm = setup->c2_.max_column_norm();

  switch (config.method) {
    case Method::kJme:
    case Method::kLambdaJme: {
      const double lambda =
          config.method == Method::kJme
              ? sensitivity::lambda_star_from_norms(c1_norm, c2_norm, zeta, d)
              : config.lambda;
      if (!(lambda > 0.0)) {
        throw std::invalid_argument("lambda-JME requires lambda > 0");
      }
      const double sens = sensitivity::joint_sensitivity_from_norms(
          c1_norm, c2_norm, lambda, zeta, d);
      setup->lambda_ = lambda;
      setup->z1_stddev_ = sigma * sens;
      setup->z2_stddev_ = sigma * sens;
      setup->second_noise_scale_ = 1.0 / std::sqrt(lambda);
      break;
    }
    case Method::kIme: {
      if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
        throw std::invalid_argument("IME requires alpha in (0, 1)");
      }
      setup->z1_stddev_ = sigma / std::sqrt(config.alpha) *
                          sensitivity::first_moment_sensitivity(c1_norm, zeta);
      setup->z2_stddev_ = sigma / std::sqrt(1.0 - config.alpha) *
                          sensitivity::ime_second_moment_sensitivity(c2_norm, zeta);
      setup->second_noise_scale_ = 1.0;
      break;
    }
    case Method::kCs: {
      if (!(config.tau > 0.0)) throw std::invalid_argument("CS requires tau > 0");
      // Single privatization of the concatenated rows; both noise blocks are
      // drawn at the same level and the second block is rescaled on output.
      const double sens = sensitivity::cs_sensitivity(c1_norm, zeta, config.tau);
      setup->z1_stddev_ = sigma * sens;
      setup->z2_stddev_ = sigma * sens;
      setup->second_noise_scale_ = 1.0 / std::sqrt(config.tau);
      break;
    }
    case Method::kPp: {
      setup->z1_stddev_ = sigma *
                          sensitivity::first_moment_sensitivity(c1_norm, zeta);
      setup->z2_stddev_ = 0.0;
      setup->second_noise_scale_ = 1.0;
      break;
    }
  }

  if (config.method == Method::kCs &&
      setup->c1_.matrix().dense().data != setup->c2_.matrix().dense().data) {
    // CS privatizes the concatenated rows in one shot, so a single shaping
    // matrix must serve both halves.
    throw std::invalid_argument("CS requires identical shaping matrices");
  }

  if (config.method == Method::kPp) {
    const linalg::Mat inv = linalg::invert_lower(setup->c1_.matrix());
    setup->q_diag_.assign(config.n, 0.0);
    for (std::size_t t = 0; t < config.n; ++t) {
      double acc = 0.0;
      for (std::size_t r = 0; r <= t; ++r) acc += inv(t, r) * inv(t, r);
      setup->q_diag_[t] = acc;
    }
    if (config.pp_debias) {
      const double var = setup->z1_stddev_ * setup->z1_stddev_;
      setup->output_bias_.assign(config.n, 0.0);
      for (std::size_t t = 0; t < config.n; ++t) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= t; ++k) {
          acc += setup->a2_(t, k) * setup->q_diag_[k];
        }
        setup->output_bias_[t] = var * acc;
      }
    }
  }
  return setup;
}

MomentEstimator::MomentEstimator(std::shared_ptr<const StreamSetup> setup,
                                 std::uint64_t trial_seed)
    : setup_(std::move(setup)) {
  const auto& cfg = setup_->config_;
  const std::size_t n = cfg.n;
  const std::size_t width2 = setup_->second_width_;

  noise_first_ = linalg::Mat(n, cfg.d);
  fill_gaussian(noise_first_, setup_->z1_stddev_,
                rng::derive_seed(trial_seed, 0, kStreamFirst));
  setup_->c1_.apply_inverse_inplace(noise_first_);

  if (cfg.method != Method::kPp) {
    noise_second_ = linalg::Mat(n, width2);
    fill_gaussian(noise_second_, setup_->z2_stddev_,
                  rng::derive_seed(trial_seed, 0, kStreamSecond));
    setup_->c2_.apply_inverse_inplace(noise_second_);
    const double scale = setup_->second_noise_scale_;
    if (scale != 1.0) {
      for (double& v : noise_second_.data) v *= scale;
    }
  }

  hat_first_ = linalg::Mat(n, cfg.d);
  hat_second_ = linalg::Mat(n, width2);
}

MomentEstimate MomentEstimator::step(std::span<const double> x) {
  const auto& cfg = setup_->config_;
  if (t_ >= cfg.n) throw std::runtime_error("MomentEstimator: stream exhausted");
  if (x.size() != cfg.d) throw std::invalid_argument("MomentEstimator: bad row width");

  const double zeta = cfg.privacy.zeta;
  double scale = 1.0;
  const double nrm = linalg::norm2(x);
  if (nrm > zeta * (1.0 + 1e-12)) {
    if (!cfg.clip_inputs) {
      throw std::invalid_argument("MomentEstimator: input row exceeds the norm bound");
    }
    scale = zeta / nrm;
  }

  const std::size_t d = cfg.d;
  const std::size_t width2 = setup_->second_width_;
  double* xhat = hat_first_.row(t_).data();
  const double* nf = noise_first_.row(t_).data();
  for (std::size_t j = 0; j < d; ++j) xhat[j] = scale * x[j] + nf[j];

  double* shat = hat_second_.row(t_).data();
  if (cfg.method == Method::kPp) {
    // Second moment derived from the privatized first moment.
    if (cfg.form == SecondMomentForm::kFullMatrix) {
      linalg::face_split_row({xhat, d}, {shat, width2});
    } else {
      linalg::square_row({xhat, d}, {shat, width2});
    }
  } else {
    const double* ns = noise_second_.row(t_).data();
    if (cfg.form == SecondMomentForm::kFullMatrix) {
      for (std::size_t i = 0; i < d; ++i) {
        const double xi = scale * x[i];
        for (std::size_t j = 0; j < d; ++j) {
          shat[i * d + j] = xi * scale * x[j] + ns[i * d + j];
        }
      }
    } else {
      for (std::size_t j = 0; j < d; ++j) {
        const double xj = scale * x[j];
        shat[j] = xj * xj + ns[j];
      }
    }
  }

  MomentEstimate out;
  out.t = t_ + 1;
  out.y_hat.assign(d, 0.0);
  out.s_hat.assign(width2, 0.0);
  const auto a1row = setup_->a1_.row(t_);
  const auto a2row = setup_->a2_.row(t_);
  for (std::size_t i = 0; i <= t_; ++i) {
    const double w1 = a1row[i];
    if (w1 != 0.0) {
      const double* src = hat_first_.row(i).data();
      for (std::size_t j = 0; j < d; ++j) out.y_hat[j] += w1 * src[j];
    }
    const double w2 = a2row[i];
    if (w2 != 0.0) {
      const double* src = hat_second_.row(i).data();
      for (std::size_t j = 0; j < width2; ++j) out.s_hat[j] += w2 * src[j];
    }
  }

  if (cfg.method == Method::kPp && cfg.pp_debias) {
    const double bias = setup_->output_bias_[t_];
    if (cfg.form == SecondMomentForm::kFullMatrix) {
      for (std::size_t j = 0; j < d; ++j) out.s_hat[j * d + j] -= bias;
    } else {
      for (std::size_t j = 0; j < d; ++j) out.s_hat[j] -= bias;
    }
  }

  if (cfg.symmetrize && cfg.form == SecondMomentForm::kFullMatrix) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) {
        const double avg = 0.5 * (out.s_hat[i * d + j] + out.s_hat[j * d + i]);
        out.s_hat[i * d + j] = avg;
        out.s_hat[j * d + i] = avg;
      }
    }
  }

  ++t_;
  return out;
}

double pp_bias_diagonal_value(const linalg::LowerTriangular& a2,
                              const workload::NoiseShaping& c1, double noise_std,
                              std::size_t t) {
  if (t == 0 || t > a2.dim()) throw std::invalid_argument("pp_bias: t out of range");
  const linalg::Mat inv = linalg::invert_lower(c1.matrix());
  double acc = 0.0;
  for (std::size_t k = 0; k < t; ++k) {
    double q_kk = 0.0;
    for (std::size_t r = 0; r <= k; ++r) q_kk += inv(k, r) * inv(k, r);
    acc += a2(t - 1, k) * q_kk;
  }
  return noise_std * noise_std * acc;
}

std::vector<MomentEstimate> run_stream(std::shared_ptr<const StreamSetup> setup,
                                       const linalg::DataMatrix& data,
                                       std::uint64_t trial_seed) {
  if (data.steps() != setup->config().n || data.dim() != setup->config().d) {
    throw std::invalid_argument("run_stream: data shape mismatch");
  }
  MomentEstimator est(setup, trial_seed);
  std::vector<MomentEstimate> out;
  out.reserve(data.steps());
  for (std::size_t t = 0; t < data.steps(); ++t) out.push_back(est.step(data.row(t)));
  return out;
}

std::vector<MomentEstimate> run_stream(const MechanismConfig& config,
                                       const linalg::DataMatrix& data) {
  return run_stream(StreamSetup::build(config), data, config.seed);
}

ExactMoments exact_moments(const linalg::LowerTriangular& a1,
                           const linalg::LowerTriangular& a2, const linalg::Mat& x,
                           SecondMomentForm form) {
  ExactMoments out{linalg::matmul_lower(a1, x),
                   form == SecondMomentForm::kFullMatrix
                       ? linalg::matmul_lower(a2, linalg::face_split(x))
                       : linalg::matmul_lower(a2, linalg::square_rows(x))};
  return out;
}

}  // namespace jme::mechanisms
