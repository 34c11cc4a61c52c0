#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rcm/uncertainty.hpp"

namespace rcm {

struct SubproblemConfig {
  double inner_tol = 1e-7;      // projected-supergradient norm target
  int max_steps = 5000;
  double unbounded_guard = 1e12;
};

struct LocalSearchConfig {
  enum class Start { MeanDifference, Given, RandomSeeded };

  double epsilon = 1e-6;  // outer stopping threshold on ||w_t - w_hat_t||
  int max_outer = 10000;
  double inner_tol = 1e-7;  // floor of the inner-tolerance schedule
  int inner_max_steps = 5000;
  Start start = Start::MeanDifference;
  Vector start_direction;  // for Start::Given
  std::uint64_t seed = 0;  // for Start::RandomSeeded and degenerate fallbacks
  double unbounded_guard = 1e12;
};

struct TraceRecord {
  int t = 0;
  Vector w_tilde;      // unit iterate
  Vector w_hat;        // subproblem solution (norm >= 1)
  double g_tilde = 0;  // g at w_tilde
  double step_norm = 0;
  int inner_iterations = 0;
};

struct SolveTrace {
  std::vector<TraceRecord> records;
};

struct LocalSearchResult {
  Vector w_star;  // unit
  double value = 0.0;
  SolveTrace trace;
  bool converged = false;
  std::optional<std::pair<Vector, Vector>> per_class;
};

/// Orthonormal basis of the hyperplane {w : w_tilde . w = 0}'s direction
/// space, as the d x (d-1) trailing block of a Householder Q.
Matrix hyperplane_basis(const Vector& w_tilde);

/// max g(w) s.t. w_tilde . w = 1 for concave g, solved in the reduced space
/// w = w_tilde + N z by supergradient ascent (sign bisection when the
/// reduced space is one-dimensional). Requires a unit w_tilde; throws
/// SubproblemUnbounded when the objective escapes upward, which signals that
/// the origin is not interior to the difference set.
Vector linearized_subproblem(const PairSet& pair, const Vector& w_tilde,
                             const SubproblemConfig& cfg = {},
                             int* iterations = nullptr);

/// Iterated linearization for the non-convex regime: solve the subproblem at
/// w_t, stop when ||w_t - w_hat_t|| <= epsilon, else renormalize and repeat.
LocalSearchResult local_search(const PairSet& pair,
                               const LocalSearchConfig& cfg = {});

struct OptimalityReport {
  double max_violation = 0.0;  // max over samples of g(w) - g(w_star)
  std::optional<bool> hessian_test;  // max eig < g(w_star), ellipsoids only
  double hessian_max_eig = 0.0;
  double g_at_w = 0.0;
};

/// Samples unit directions within angle delta of w_star and reports the
/// largest improvement found; for ellipsoid-family pairs also runs the
/// analytic second-order test.
OptimalityReport local_optimality_check(const PairSet& pair,
                                        const Vector& w_star, double delta,
                                        int n_samples, std::uint64_t seed);

bool is_ellipsoid_pair(const PairSet& pair);

/// Analytic Hessian of g for ellipsoid-family pairs:
/// sum over classes of -kappa (Sigma/||Sw|| - (Sigma w)(Sigma w)^T/||Sw||^3).
/// Throws NotDifferentiable off the family or when a seminorm vanishes.
Matrix hessian_g(const PairSet& pair, const Vector& w);

}  // namespace rcm
