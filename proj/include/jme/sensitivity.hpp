#pragma once

#include <cstddef>

#include "jme/workload.hpp"

namespace jme::sensitivity {

// Critical constant c_d: 8/(11 + 5 sqrt(5)) for d = 1, and 2 for d >= 2.
// 1/c_d is the branch point of r_d.
double critical_constant(std::size_t d);

// Maximum of |x - y|^2 + nu |x (x) x - y (x) y|^2 over the unit balls,
// in closed form:
//   d = 1:  4 for nu <= (11 + 5 sqrt(5))/8, else (1/8)(3 - tau)^2 (nu tau + 1 + nu)
//           with tau = sqrt(1 - 2/nu);
//   d >= 2: 4 for nu <= 1/2, else 2 + 2 nu + 1/(2 nu).
double r_d(double nu, std::size_t d);

// Sensitivity of releasing (C1 X, sqrt(lambda) C2 (X face X)) jointly:
//   zeta |C1| * sqrt(r_d(lambda zeta^2 |C2|^2 / |C1|^2))
// with |.| the max column norm. Both matrices must have non-increasing
// column norms (enforced by NoiseShaping construction).
double joint_sensitivity(const workload::NoiseShaping& c1,
                         const workload::NoiseShaping& c2, double lambda,
                         double zeta, std::size_t d);
double joint_sensitivity_from_norms(double c1_norm, double c2_norm, double lambda,
                                    double zeta, std::size_t d);

// The second-moment scaling at which the joint sensitivity collapses to the
// first moment's alone: lambda* = |C1|^2 / (c_d zeta^2 |C2|^2). At this
// value joint_sensitivity == 2 zeta |C1| exactly.
double lambda_star(const workload::NoiseShaping& c1,
                   const workload::NoiseShaping& c2, double zeta, std::size_t d);
double lambda_star_from_norms(double c1_norm, double c2_norm, double zeta,
                              std::size_t d);

// Per-stream sensitivities of the baselines.
double first_moment_sensitivity(double c1_norm, double zeta);          // 2 zeta |C1|
double ime_second_moment_sensitivity(double c2_norm, double zeta);     // sqrt(2) zeta^2 |C2|
// Concatenate-and-split: 2 zeta sqrt(1 + tau zeta^2) |C|. The shaping-norm
// factor is 1 for the default identity shaping.
double cs_sensitivity(double c_norm, double zeta, double tau);

struct SensitivityProfile {
  std::size_t d = 0;
  double zeta = 0.0;
  double c_d = 0.0;
  double lambda_star = 0.0;
  double joint = 0.0;        // joint sensitivity at lambda*
  double first = 0.0;        // 2 zeta |C1|
  double ime_second = 0.0;   // sqrt(2) zeta^2 |C2|
  double cs = 0.0;           // 2 zeta sqrt(1 + tau zeta^2) |C|, using C1's norm
};

SensitivityProfile make_profile(const workload::NoiseShaping& c1,
                                const workload::NoiseShaping& c2, double zeta,
                                std::size_t d, double tau = 1.0);

// Independent grid-search oracles for r_d. A coarse product grid over the
// unit balls is refined by per-coordinate ascent; cost grows quickly with d,
// so these accept d in {1, 2, 3} only. Deterministic for fixed inputs.
double brute_force_rd(double nu, std::size_t d, std::size_t grid_resolution);
double brute_force_rd_diag(double nu, std::size_t d, std::size_t grid_resolution);

// Unreduced low-resolution searches (no symmetry reduction of the domain),
// used as sanity checks on the reduced oracles above.
double brute_force_rd_unreduced(double nu, std::size_t d, std::size_t grid_resolution);
double brute_force_rd_diag_unreduced(double nu, std::size_t d,
                                     std::size_t grid_resolution);

}  // namespace jme::sensitivity
