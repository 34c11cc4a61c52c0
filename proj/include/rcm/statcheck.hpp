#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rcm/uncertainty.hpp"

namespace rcm {

/// A classification loss z -> l(z) with the metadata the worst-case bounds
/// need. curvature_bound L certifies 0 <= l''(z) <= L.
struct LossSpec {
  std::string name;
  std::function<double(double)> eval;
  std::optional<double> curvature_bound;
  bool monotone_nonincreasing = true;
};

LossSpec exponential_loss();  // e^{-z}; no curvature bound
LossSpec logistic_loss();     // ln(1 + e^{-z}); L = 1/4

/// Finite-difference spot check of 0 <= l'' <= L and l' <= 0 on a z-grid.
/// Throws InvalidLoss when the bound is missing or violated.
void validate_curvature(const LossSpec& loss, double z_lo = -50.0,
                        double z_hi = 50.0, int grid = 101);

struct ClassPriors {
  double pi_plus = 0.5;
  double pi_minus = 0.5;
};

struct DiscreteDistribution {
  std::vector<Vector> support;
  std::vector<double> weights;  // >= 0, sum 1
  Vector mean() const;
  void validate() const;
};

/// pi+ l(x+ . w + b) + pi- l(-x- . w - b).
double j_loss(const Vector& w, double b, const Vector& x_plus,
              const Vector& x_minus, const ClassPriors& priors,
              const LossSpec& loss);

struct BiasMin {
  double b = 0.0;
  double value = 0.0;
};

/// Golden-section minimization of b -> j_loss over a symmetric data-scaled
/// bracket (default [-B, B], B = 10 * max projection magnitude + 10).
BiasMin min_bias_j(const Vector& w, const Vector& x_plus,
                   const Vector& x_minus, const ClassPriors& priors,
                   const LossSpec& loss,
                   std::optional<std::pair<double, double>> bracket = {},
                   double tol = 1e-9);

/// Convex hull of the family's mean vectors.
UncertaintySet mean_set(const std::vector<DiscreteDistribution>& family);

/// max over mixtures of both families (vertex pairs plus a simplex grid of
/// the given step) of min_b expected loss at the fixed direction w, with the
/// expectation enumerated exactly over support points.
double worst_case_expected_loss(
    const std::vector<DiscreteDistribution>& p_plus,
    const std::vector<DiscreteDistribution>& p_minus, const Vector& w,
    const ClassPriors& priors, const LossSpec& loss, double tol = 1e-9,
    double mixture_step = 0.05);

struct SandwichReport {
  double j_star = 0.0;
  double worst = 0.0;
  double upper = 0.0;  // j_star + L c^2 / 2
  double c = 0.0;      // max mean norm over both families
  bool holds = false;
  Vector w;  // RCM direction on the mean sets
};

/// Bracket check: solve the RCM on the mean hulls, evaluate J* there (inner
/// max over member means), compare with the worst-case expected loss.
SandwichReport sandwich_check(const std::vector<DiscreteDistribution>& p_plus,
                              const std::vector<DiscreteDistribution>& p_minus,
                              const ClassPriors& priors, const LossSpec& loss,
                              double tol = 1e-9, double mixture_step = 0.05);

}  // namespace rcm
