#pragma once

namespace jme::calibration {

// delta achieved by the Gaussian mechanism with multiplier sigma on a
// sensitivity-1 query, per the analytic mechanism characterization:
//   delta(sigma) = Phi(1/(2 sigma) - eps sigma) - e^eps Phi(-1/(2 sigma) - eps sigma).
double gaussian_mechanism_delta(double epsilon, double sigma);

// Smallest sigma with gaussian_mechanism_delta(eps, sigma) <= delta, found by
// bisection on [1e-4, 1e4] to 1e-6 relative width. Throws if the bracket does
// not contain a solution.
double calibrate_sigma(double epsilon, double delta);

// Classical closed-form bound sqrt(2 ln(1.25/delta)) / eps. Kept only as a
// labeled cross-check; it is loose in some regimes.
double classical_sigma(double epsilon, double delta);

// Privacy budget plus the derived noise multiplier and the input norm bound.
struct PrivacyParams {
  double epsilon = 0.0;
  double delta = 0.0;
  double sigma = 0.0;  // sigma_{eps,delta}, multiplier for sensitivity-1 queries
  double zeta = 1.0;   // per-row l2 clip bound

  static PrivacyParams from_epsilon_delta(double epsilon, double delta,
                                          double zeta = 1.0);
  // Experiments are usually parameterized by sigma directly.
  static PrivacyParams from_sigma(double sigma, double zeta = 1.0);
};

// Noise stddev for a query of the given sensitivity: sensitivity * sigma.
double mechanism_noise_stddev(const PrivacyParams& params, double sensitivity);

}  // namespace jme::calibration
