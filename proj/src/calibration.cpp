#include "jme/calibration.hpp"

#include <cmath>
#include <stdexcept>

namespace jme::calibration {

namespace {

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

constexpr double kSigmaLo = 1e-4;
constexpr double kSigmaHi = 1e4;
constexpr double kRelTol = 1e-6;

}  // namespace

double gaussian_mechanism_delta(double epsilon, double sigma) {
  const double a = 1.0 / (2.0 * sigma) - epsilon * sigma;
  const double b = -1.0 / (2.0 * sigma) - epsilon * sigma;
  // exp(eps) * Phi(b) can overflow times underflow; combine in log space.
  const double tail = standard_normal_cdf(b);
  const double scaled = tail > 0.0 ? std::exp(epsilon + std::log(tail)) : 0.0;
  return standard_normal_cdf(a) - scaled;
}

double calibrate_sigma(double epsilon, double delta) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("calibrate_sigma: epsilon must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("calibrate_sigma: delta must be in (0, 1)");
  }
  double lo = kSigmaLo;
  double hi = kSigmaHi;
  if (gaussian_mechanism_delta(epsilon, hi) > delta) {
    throw std::invalid_argument("calibrate_sigma: no solution in bracket");
  }
  if (gaussian_mechanism_delta(epsilon, lo) <= delta) return lo;
  while (hi - lo > kRelTol * lo) {
    const double mid = 0.5 * (lo + hi);
    if (gaussian_mechanism_delta(epsilon, mid) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double classical_sigma(double epsilon, double delta) {
  return std::sqrt(2.0 * std::log(1.25 / delta)) / epsilon;
}

PrivacyParams PrivacyParams::from_epsilon_delta(double epsilon, double delta,
                                                double zeta) {
  if (zeta <= 0.0) throw std::invalid_argument("PrivacyParams: zeta must be > 0");
  return {epsilon, delta, calibrate_sigma(epsilon, delta), zeta};
}

PrivacyParams PrivacyParams::from_sigma(double sigma, double zeta) {
  if (sigma < 0.0) throw std::invalid_argument("PrivacyParams: sigma must be >= 0");
  if (zeta <= 0.0) throw std::invalid_argument("PrivacyParams: zeta must be > 0");
  return {0.0, 0.0, sigma, zeta};
}

double mechanism_noise_stddev(const PrivacyParams& params, double sensitivity) {
  if (sensitivity < 0.0) {
    throw std::invalid_argument("mechanism_noise_stddev: sensitivity must be >= 0");
  }
  return sensitivity * params.sigma;
}

}  // namespace jme::calibration
