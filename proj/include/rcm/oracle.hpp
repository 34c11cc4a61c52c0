#pragma once

#include <utility>

#include "rcm/uncertainty.hpp"

namespace rcm::oracle {

struct GridSolveResult {
  Vector w_best;
  double value = 0.0;
  int grid_resolution = 0;
};

/// Exhaustive evaluation of the worst-case separation over a direction grid:
/// {+1,-1} for d = 1, uniform angles for d = 2, a Fibonacci sphere for d = 3.
/// Throws DimensionTooLarge above d = 3.
GridSolveResult grid_sphere_solve(const PairSet& pair, int resolution);

struct GridNearestResult {
  double distance = 0.0;
  Vector x_plus, x_minus;
};

/// Brute-force nearest point between two hull sets (plain or reduced) by
/// enumerating capped-simplex weights on a lambda grid. At most 3 points per
/// class; lambda_step <= 0.02.
GridNearestResult grid_nearest_point(const PairSet& pair, double lambda_step);

/// w proportional to (cov_plus + cov_minus)^{-1} (mean difference), and the
/// critical radius zeta_max = sqrt(diff^T (cov_plus+cov_minus)^{-1} diff).
std::pair<Vector, double> fda_closed_form(const ClassMoments& plus,
                                          const ClassMoments& minus);

/// kappa_max = 1 / min { ||S+ w|| + ||S- w|| : (mean diff) . w = 1 },
/// computed by projected gradient descent on the affine slice; independent
/// reference for the ellipsoid-family critical radius.
double mpm_kappa_closed_form(const ClassMoments& plus,
                             const ClassMoments& minus, double tol = 1e-8);

}  // namespace rcm::oracle
