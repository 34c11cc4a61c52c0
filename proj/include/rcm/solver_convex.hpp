#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rcm/uncertainty.hpp"

namespace rcm {

struct NearestPointResult {
  Vector x_star;
  std::optional<std::pair<Vector, Vector>> per_class;
  double distance = 0.0;
  double gap = 0.0;  // final Frank-Wolfe gap <x - s, x>
  int iterations = 0;
  bool converged = false;
  std::vector<double> norm_trace;  // ||x_k|| per outer iteration
};

/// Minimum-norm point of the difference set. Frank-Wolfe outer loop on the
/// support oracle with Wolfe-style simplex correction over the collected
/// support atoms; stops when the FW gap drops to tol^2.
NearestPointResult nearest_point(const PairSet& pair, double tol = 1e-8,
                                 int max_iter = 100000);

enum class Regime { StrictlySeparated, Touching, Overlapping };

/// Sign trichotomy of the optimal value: 0 outside / on the boundary /
/// inside the difference set.
Regime classify_regime(double g_opt, double tol = 1e-6);

const char* regime_name(Regime r);

struct ConvexSolution {
  Vector w_star;  // unit
  double value = 0.0;
  std::optional<std::pair<Vector, Vector>> per_class;
};

/// w* = x*/||x*|| from the nearest point; requires strict separation.
/// Throws NotSeparated when the distance is <= tol.
ConvexSolution solve_convex(const PairSet& pair, double tol = 1e-8,
                            int max_iter = 100000);

enum class EtaMaxStatus { Found, NeverIntersects, AlwaysIntersects,
                          NotApplicable };

const char* eta_max_status_name(EtaMaxStatus s);

struct EtaMaxResult {
  double eta_max = 0.0;  // normalized units; meaningful when Found
  std::pair<double, double> bracket{0.0, 0.0};
  double distance_at_eta_max = 0.0;
  EtaMaxStatus status = EtaMaxStatus::NotApplicable;
  // nearest-point witness from the separated side of the final bracket;
  // carries the boundary direction and touching pair
  Vector witness_x;
  std::optional<std::pair<Vector, Vector>> witness_per_class;
  double witness_distance = 0.0;
};

struct EtaMaxConfig {
  double tol = 1e-6;         // bracket width in normalized eta
  double member_tol = 1e-7;  // distance threshold for "0 in U^eta"
  double np_tol = 1e-8;      // nearest-point gap tolerance
  int np_max_iter = 100000;
};

/// Bisection for the smallest eta with 0 in U^eta, using the nearest-point
/// distance as the membership oracle. Throws InvalidBracket when lo >= hi or
/// the bracket leaves the family's valid range.
EtaMaxResult eta_max(const PairBuilder& builder, double lo, double hi,
                     const EtaMaxConfig& cfg = {});

/// eta_max over the family's default bracket: [0, eta_hi] for reduced hulls,
/// [0, hi] with hi doubled until intersection (cap 2^60) for the ellipsoidal
/// families.
EtaMaxResult eta_max_auto(const PairBuilder& builder,
                          const EtaMaxConfig& cfg = {});

struct LocalSearchConfig;  // solver_nonconvex.hpp

struct SweepPoint {
  double eta = 0.0;   // normalized
  double value = 0.0; // optimal RCM value at this eta
  Regime regime = Regime::StrictlySeparated;
};

struct SweepConfig {
  EtaMaxConfig eta_cfg;
  double boundary_tol = 1e-6;  // |eta - eta_max| band solved as the boundary
};

/// Optimal value per grid point, convex or non-convex path chosen against
/// eta_max. Grid must be ascending in normalized eta. Grid points are solved
/// independently (no warm starting), so evaluation order cannot matter.
std::vector<SweepPoint> eta_sweep(const PairBuilder& builder,
                                  const std::vector<double>& grid,
                                  const SweepConfig& cfg = {});

}  // namespace rcm
