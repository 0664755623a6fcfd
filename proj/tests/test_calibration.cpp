#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jme/calibration.hpp"

using namespace jme;

TEST_CASE("low privacy regime lands near 0.5") {
  const double sigma = calibration::calibrate_sigma(8.0, 1e-3);
  CHECK(sigma >= 0.35);
  CHECK(sigma <= 0.65);
}

TEST_CASE("high privacy regime lands near 50") {
  const double sigma = calibration::calibrate_sigma(0.1, 1e-9);
  CHECK(sigma >= 40.0);
  CHECK(sigma <= 62.0);
}

TEST_CASE("calibrated sigma is minimal") {
  for (const auto [eps, delta] : {std::pair{1.0, 1e-6}, {8.0, 1e-3}, {0.5, 1e-8}}) {
    const double sigma = calibration::calibrate_sigma(eps, delta);
    CHECK(calibration::gaussian_mechanism_delta(eps, sigma) <= delta * (1 + 1e-9));
    CHECK(calibration::gaussian_mechanism_delta(eps, sigma * 0.999) > delta);
  }
}

TEST_CASE("monotone in epsilon and delta") {
  CHECK(calibration::calibrate_sigma(1.0, 1e-6) > calibration::calibrate_sigma(2.0, 1e-6));
  for (double eps : {0.25, 1.0, 4.0}) {
    double prev = calibration::calibrate_sigma(eps, 1e-9);
    for (double delta : {1e-8, 1e-7, 1e-6, 1e-5}) {
      const double cur = calibration::calibrate_sigma(eps, delta);
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("classical bound is an upper bound in the moderate regime") {
  for (double eps : {0.1, 0.5, 1.0}) {
    for (double delta : {1e-6, 1e-9}) {
      CHECK(calibration::classical_sigma(eps, delta) >=
            calibration::calibrate_sigma(eps, delta));
    }
  }
}

TEST_CASE("noise stddev scales with sensitivity") {
  const auto params = calibration::PrivacyParams::from_sigma(0.5, 1.0);
  CHECK(calibration::mechanism_noise_stddev(params, 0.0) == 0.0);
  CHECK(calibration::mechanism_noise_stddev(params, 1.0) == doctest::Approx(0.5));
  // sens = 2 zeta |C1| with zeta = 1, C = I
  CHECK(calibration::mechanism_noise_stddev(params, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(calibration::calibrate_sigma(-1.0, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(calibration::calibrate_sigma(1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(calibration::PrivacyParams::from_sigma(0.5, -1.0), std::invalid_argument);
}
