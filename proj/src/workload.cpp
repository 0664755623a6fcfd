#include "jme/workload.hpp"

#include <charconv>
#include <stdexcept>

namespace jme::workload {

namespace {

double parse_number(std::string_view text, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument(std::string("invalid ") + what + ": '" +
                                std::string(text) + "'");
  }
  return value;
}

}  // namespace

WorkloadSpec WorkloadSpec::exponential(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("exponential workload: beta must be in (0, 1)");
  }
  return {Kind::kExponential, beta, 0};
}

WorkloadSpec WorkloadSpec::sliding_window(std::size_t k) {
  if (k < 1) throw std::invalid_argument("sliding window: k must be >= 1");
  return {Kind::kSlidingWindow, 0.0, k};
}

WorkloadSpec WorkloadSpec::parse(std::string_view text) {
  if (text == "prefix") return prefix_sum();
  if (text == "average") return average();
  if (text.starts_with("exp:")) {
    return exponential(parse_number(text.substr(4), "beta"));
  }
  if (text.starts_with("window:")) {
    const double k = parse_number(text.substr(7), "window size");
    if (k < 1 || k != static_cast<double>(static_cast<std::size_t>(k))) {
      throw std::invalid_argument("window size must be a positive integer");
    }
    return sliding_window(static_cast<std::size_t>(k));
  }
  throw std::invalid_argument("unknown workload '" + std::string(text) +
                              "' (expected prefix | average | exp:<beta> | window:<k>)");
}

std::string WorkloadSpec::to_string() const {
  switch (kind) {
    case Kind::kPrefixSum: return "prefix";
    case Kind::kAverage: return "average";
    case Kind::kExponential: return "exp:" + std::to_string(beta);
    case Kind::kSlidingWindow: return "window:" + std::to_string(window);
  }
  return "?";
}

linalg::LowerTriangular build_workload(const WorkloadSpec& spec, std::size_t n) {
  if (n < 1) throw std::invalid_argument("build_workload: n must be >= 1");
  if (spec.kind == Kind::kExponential && !(spec.beta > 0.0 && spec.beta < 1.0)) {
    throw std::invalid_argument("build_workload: beta must be in (0, 1)");
  }
  if (spec.kind == Kind::kSlidingWindow && (spec.window < 1 || spec.window > n)) {
    throw std::invalid_argument("build_workload: window size must be in [1, n]");
  }
  linalg::LowerTriangular a(n);
  for (std::size_t t = 0; t < n; ++t) {
    switch (spec.kind) {
      case Kind::kPrefixSum:
        for (std::size_t i = 0; i <= t; ++i) a.at(t, i) = 1.0;
        break;
      case Kind::kAverage:
        for (std::size_t i = 0; i <= t; ++i) a.at(t, i) = 1.0 / static_cast<double>(t + 1);
        break;
      case Kind::kExponential: {
        double w = 1.0;
        for (std::size_t i = t + 1; i-- > 0;) {
          a.at(t, i) = w;
          w *= spec.beta;
        }
        break;
      }
      case Kind::kSlidingWindow: {
        const std::size_t lo = (t + 1 > spec.window) ? t + 1 - spec.window : 0;
        for (std::size_t i = lo; i <= t; ++i) {
          a.at(t, i) = 1.0 / static_cast<double>(spec.window);
        }
        break;
      }
    }
  }
  return a;
}

Factorization parse_factorization(std::string_view text) {
  if (text == "identity") return Factorization::kIdentity;
  if (text == "sqrt") return Factorization::kSquareRoot;
  throw std::invalid_argument("unknown factorization '" + std::string(text) +
                              "' (expected identity | sqrt)");
}

std::string to_string(Factorization f) {
  return f == Factorization::kIdentity ? "identity" : "sqrt";
}

NoiseShaping::NoiseShaping(linalg::LowerTriangular c, bool is_identity)
    : matrix_(std::move(c)), is_identity_(is_identity) {
  column_norms_ = linalg::column_norms(matrix_);
  max_column_norm_ = column_norms_.front();
  for (std::size_t j = 0; j + 1 < column_norms_.size(); ++j) {
    if (column_norms_[j + 1] > column_norms_[j] * (1.0 + 1e-12)) {
      throw std::invalid_argument(
          "NoiseShaping: column norms must be non-increasing");
    }
  }
  for (std::size_t i = 0; i < matrix_.dim(); ++i) {
    if (matrix_(i, i) == 0.0) {
      throw std::invalid_argument("NoiseShaping: matrix must be invertible");
    }
  }
}

NoiseShaping NoiseShaping::identity(std::size_t n) {
  return NoiseShaping(linalg::LowerTriangular::identity(n), true);
}

NoiseShaping NoiseShaping::from_matrix(linalg::LowerTriangular c) {
  return NoiseShaping(std::move(c), false);
}

NoiseShaping NoiseShaping::from_toeplitz(const linalg::ToeplitzCoeffs& c) {
  return NoiseShaping(c.materialize(), false);
}

void NoiseShaping::apply_inverse_inplace(linalg::Mat& z) const {
  if (is_identity_) return;
  linalg::solve_lower_inplace(matrix_, z);
}

NoiseShaping build_noise_shaping(Factorization f, const WorkloadSpec& spec,
                                 std::size_t n) {
  if (f == Factorization::kIdentity) return NoiseShaping::identity(n);

  linalg::ToeplitzCoeffs gen;
  gen.coeffs.assign(n, 0.0);
  switch (spec.kind) {
    case Kind::kPrefixSum:
    case Kind::kAverage:
      // Average is the row-scaled prefix sum; factor the prefix-sum matrix.
      for (double& v : gen.coeffs) v = 1.0;
      break;
    case Kind::kExponential: {
      double w = 1.0;
      for (double& v : gen.coeffs) {
        v = w;
        w *= spec.beta;
      }
      break;
    }
    case Kind::kSlidingWindow:
      // Factor the unnormalized window-sum matrix.
      for (std::size_t i = 0; i < std::min(spec.window, n); ++i) gen.coeffs[i] = 1.0;
      break;
  }
  return NoiseShaping::from_toeplitz(linalg::toeplitz_sqrt(gen));
}

}  // namespace jme::workload
