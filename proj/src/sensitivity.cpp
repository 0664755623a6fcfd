#include "jme/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace jme::sensitivity {

namespace {

constexpr double kBranchPointD1 = 2.7725424859373686;  // (11 + 5 sqrt(5)) / 8

// |x - y|^2 + nu |x (x) x - y (x) y|^2, evaluated literally on the
// d^2-dimensional Kronecker rows.
double full_objective(std::span<const double> x, std::span<const double> y,
                      double nu) {
  double dist = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = x[i] - y[i];
    dist += diff * diff;
  }
  double kron = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double diff = x[i] * x[j] - y[i] * y[j];
      kron += diff * diff;
    }
  }
  return dist + nu * kron;
}

// |x - y|^2 + nu |x o x - y o y|^2 (diagonal terms only).
double diag_objective(std::span<const double> x, std::span<const double> y,
                      double nu) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = x[i] - y[i];
    const double sq = x[i] * x[i] - y[i] * y[i];
    acc += diff * diff + nu * sq * sq;
  }
  return acc;
}

struct Box {
  double lo;
  double hi;
};

// Hill climbing per coordinate with a shrinking step, starting from the best
// grid point. The objectives are smooth, so this polishes the grid optimum
// well below the acceptance tolerances.
double coordinate_ascend(std::vector<double>& params, const std::vector<Box>& bounds,
                         const std::function<double(const std::vector<double>&)>& f) {
  double best = f(params);
  double step = 0.1;
  while (step > 1e-7) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t i = 0; i < params.size(); ++i) {
        for (const double delta : {step, -step}) {
          const double old = params[i];
          params[i] = std::clamp(old + delta, bounds[i].lo, bounds[i].hi);
          const double val = f(params);
          if (val > best) {
            best = val;
            improved = true;
          } else {
            params[i] = old;
          }
        }
      }
    }
    step /= 3.0;
  }
  return best;
}

double grid_then_refine(std::size_t resolution, const std::vector<Box>& bounds,
                        const std::function<double(const std::vector<double>&)>& f) {
  const std::size_t dims = bounds.size();
  std::vector<double> point(dims), best_point(dims);
  for (std::size_t i = 0; i < dims; ++i) best_point[i] = bounds[i].lo;
  double best = f(best_point);

  std::vector<std::size_t> idx(dims, 0);
  while (true) {
    for (std::size_t i = 0; i < dims; ++i) {
      const double frac = resolution > 1
                              ? static_cast<double>(idx[i]) / static_cast<double>(resolution - 1)
                              : 0.0;
      point[i] = bounds[i].lo + frac * (bounds[i].hi - bounds[i].lo);
    }
    const double val = f(point);
    if (val > best) {
      best = val;
      best_point = point;
    }
    std::size_t k = 0;
    while (k < dims && ++idx[k] == resolution) {
      idx[k] = 0;
      ++k;
    }
    if (k == dims) break;
  }
  return coordinate_ascend(best_point, bounds, f);
}

void spherical3(double r, double theta, double phi, double* out) {
  out[0] = r * std::sin(phi) * std::cos(theta);
  out[1] = r * std::sin(phi) * std::sin(theta);
  out[2] = r * std::cos(phi);
}

}  // namespace

double critical_constant(std::size_t d) {
  if (d < 1) throw std::invalid_argument("critical_constant: d must be >= 1");
  return d == 1 ? 1.0 / kBranchPointD1 : 2.0;
}

double r_d(double nu, std::size_t d) {
  if (!(nu > 0.0)) throw std::invalid_argument("r_d: nu must be > 0");
  if (d < 1) throw std::invalid_argument("r_d: d must be >= 1");
  if (d == 1) {
    if (nu <= kBranchPointD1) return 4.0;
    const double tau = std::sqrt(1.0 - 2.0 / nu);
    return (1.0 / 8.0) * (3.0 - tau) * (3.0 - tau) * (nu * tau + 1.0 + nu);
  }
  if (nu <= 0.5) return 4.0;
  return 2.0 + 2.0 * nu + 1.0 / (2.0 * nu);
}

double joint_sensitivity_from_norms(double c1_norm, double c2_norm, double lambda,
                                    double zeta, std::size_t d) {
  if (!(lambda > 0.0)) throw std::invalid_argument("joint_sensitivity: lambda must be > 0");
  const double nu = lambda * zeta * zeta * c2_norm * c2_norm / (c1_norm * c1_norm);
  return zeta * c1_norm * std::sqrt(r_d(nu, d));
}

double joint_sensitivity(const workload::NoiseShaping& c1,
                         const workload::NoiseShaping& c2, double lambda,
                         double zeta, std::size_t d) {
  return joint_sensitivity_from_norms(c1.max_column_norm(), c2.max_column_norm(),
                                      lambda, zeta, d);
}

double lambda_star_from_norms(double c1_norm, double c2_norm, double zeta,
                              std::size_t d) {
  return (c1_norm * c1_norm) /
         (critical_constant(d) * zeta * zeta * c2_norm * c2_norm);
}

double lambda_star(const workload::NoiseShaping& c1,
                   const workload::NoiseShaping& c2, double zeta, std::size_t d) {
  return lambda_star_from_norms(c1.max_column_norm(), c2.max_column_norm(), zeta, d);
}

double first_moment_sensitivity(double c1_norm, double zeta) {
  return 2.0 * zeta * c1_norm;
}

double ime_second_moment_sensitivity(double c2_norm, double zeta) {
  return std::sqrt(2.0) * zeta * zeta * c2_norm;
}

double cs_sensitivity(double c_norm, double zeta, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("cs_sensitivity: tau must be > 0");
  return 2.0 * zeta * std::sqrt(1.0 + tau * zeta * zeta) * c_norm;
}

SensitivityProfile make_profile(const workload::NoiseShaping& c1,
                                const workload::NoiseShaping& c2, double zeta,
                                std::size_t d, double tau) {
  SensitivityProfile p;
  p.d = d;
  p.zeta = zeta;
  p.c_d = critical_constant(d);
  p.lambda_star = lambda_star(c1, c2, zeta, d);
  p.joint = joint_sensitivity(c1, c2, p.lambda_star, zeta, d);
  p.first = first_moment_sensitivity(c1.max_column_norm(), zeta);
  p.ime_second = ime_second_moment_sensitivity(c2.max_column_norm(), zeta);
  p.cs = cs_sensitivity(c1.max_column_norm(), zeta, tau);
  return p;
}

double brute_force_rd(double nu, std::size_t d, std::size_t grid_resolution) {
  if (grid_resolution < 2) throw std::invalid_argument("brute_force_rd: grid too coarse");
  if (d == 1) {
    const std::vector<Box> bounds{{-1.0, 1.0}, {-1.0, 1.0}};
    return grid_then_refine(grid_resolution, bounds, [nu](const std::vector<double>& p) {
      const double x[1] = {p[0]};
      const double y[1] = {p[1]};
      return full_objective(x, y, nu);
    });
  }
  if (d == 2 || d == 3) {
    // The objective is invariant under joint rotations, so x can be fixed
    // along the first axis and y placed in the first coordinate plane; the
    // actual vectors are still built and the raw objective evaluated.
    const std::vector<Box> bounds{{0.0, 1.0}, {0.0, 1.0}, {0.0, std::numbers::pi}};
    return grid_then_refine(grid_resolution, bounds, [nu, d](const std::vector<double>& p) {
      double x[3] = {p[0], 0.0, 0.0};
      double y[3] = {p[1] * std::cos(p[2]), p[1] * std::sin(p[2]), 0.0};
      return full_objective({x, d}, {y, d}, nu);
    });
  }
  throw std::invalid_argument("brute_force_rd: d must be in {1, 2, 3}");
}

double brute_force_rd_diag(double nu, std::size_t d, std::size_t grid_resolution) {
  if (grid_resolution < 2) throw std::invalid_argument("brute_force_rd_diag: grid too coarse");
  // Sign reduction: flipping the sign of y_i when x_i y_i > 0 leaves the
  // squared-coordinate term unchanged and cannot decrease |x - y|, so the
  // optimum has x in the positive orthant and y in the negative one.
  if (d == 2) {
    const std::vector<Box> bounds{
        {0.0, 1.0}, {0.0, std::numbers::pi / 2}, {0.0, 1.0}, {0.0, std::numbers::pi / 2}};
    return grid_then_refine(grid_resolution, bounds, [nu](const std::vector<double>& p) {
      const double x[2] = {p[0] * std::cos(p[1]), p[0] * std::sin(p[1])};
      const double y[2] = {-p[2] * std::cos(p[3]), -p[2] * std::sin(p[3])};
      return diag_objective(x, y, nu);
    });
  }
  if (d == 3) {
    const std::vector<Box> bounds{{0.0, 1.0}, {0.0, std::numbers::pi / 2},
                                  {0.0, std::numbers::pi / 2}, {0.0, 1.0},
                                  {0.0, std::numbers::pi / 2}, {0.0, std::numbers::pi / 2}};
    return grid_then_refine(grid_resolution, bounds, [nu](const std::vector<double>& p) {
      double x[3], y[3];
      spherical3(p[0], p[1], p[2], x);
      spherical3(p[3], p[4], p[5], y);
      for (double& v : y) v = -v;
      return diag_objective(x, y, nu);
    });
  }
  throw std::invalid_argument("brute_force_rd_diag: d must be in {2, 3}");
}

namespace {

// Cartesian product grid over the two balls with no symmetry reduction.
double unreduced_search(double nu, std::size_t d, std::size_t resolution,
                        bool diagonal) {
  const std::size_t dims = 2 * d;
  std::vector<double> coords(dims, -1.0);
  std::vector<std::size_t> idx(dims, 0);
  double best = 0.0;
  while (true) {
    for (std::size_t i = 0; i < dims; ++i) {
      coords[i] = -1.0 + 2.0 * static_cast<double>(idx[i]) /
                             static_cast<double>(resolution - 1);
    }
    std::span<const double> x(coords.data(), d);
    std::span<const double> y(coords.data() + d, d);
    double nx = 0.0, ny = 0.0;
    for (double v : x) nx += v * v;
    for (double v : y) ny += v * v;
    if (nx <= 1.0 && ny <= 1.0) {
      const double val =
          diagonal ? diag_objective(x, y, nu) : full_objective(x, y, nu);
      best = std::max(best, val);
    }
    std::size_t k = 0;
    while (k < dims && ++idx[k] == resolution) {
      idx[k] = 0;
      ++k;
    }
    if (k == dims) break;
  }
  return best;
}

}  // namespace

double brute_force_rd_unreduced(double nu, std::size_t d, std::size_t grid_resolution) {
  if (d < 1 || d > 3) throw std::invalid_argument("brute_force_rd_unreduced: d in {1,2,3}");
  return unreduced_search(nu, d, grid_resolution, /*diagonal=*/false);
}

double brute_force_rd_diag_unreduced(double nu, std::size_t d,
                                     std::size_t grid_resolution) {
  if (d < 2 || d > 3) throw std::invalid_argument("brute_force_rd_diag_unreduced: d in {2,3}");
  return unreduced_search(nu, d, grid_resolution, /*diagonal=*/true);
}

}  // namespace jme::sensitivity
