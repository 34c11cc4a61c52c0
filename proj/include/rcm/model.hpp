#pragma once

#include <optional>
#include <string>
#include <utility>

#include "rcm/dataset.hpp"
#include "rcm/solver_convex.hpp"
#include "rcm/solver_nonconvex.hpp"
#include "rcm/uncertainty.hpp"

namespace rcm {

enum class BiasMethod { Midpoint, BestThreshold };

const char* bias_method_name(BiasMethod b);
BiasMethod bias_method_from_name(const std::string& name);

/// Family-native parameter request: nu, kappa (max of the two radii when
/// asymmetric) or zeta, or Auto = the critical parameter eta_max itself.
struct ParamSpec {
  bool is_auto = true;
  double value = 0.0;
  static ParamSpec automatic() { return {true, 0.0}; }
  static ParamSpec native(double v) { return {false, v}; }
};

struct TrainConfig {
  double ridge_factor = 1e-6;  // relative covariance ridge
  double np_tol = 1e-8;
  int np_max_iter = 100000;
  double boundary_tol = 1e-6;  // |eta - eta_max| band solved as the boundary
  EtaMaxConfig eta_cfg;
  LocalSearchConfig search;
  BiasMethod bias = BiasMethod::Midpoint;
};

struct TrainedModel {
  Vector w;  // unit
  double b = 0.0;
  Family family = Family::Ellipsoid;
  // resolved family-native parameter; NaN for the unparametrized hull family
  double param = 0.0;
  double kappa_plus = 0.0, kappa_minus = 0.0;  // ellipsoid family only
  std::optional<double> eta_max_native;
  EtaMaxStatus eta_max_status = EtaMaxStatus::NotApplicable;
  Regime regime = Regime::StrictlySeparated;
  double g_value = 0.0;
  std::optional<std::pair<Vector, Vector>> per_class;
  BiasMethod bias_method = BiasMethod::Midpoint;
  bool bias_from_class_means = false;  // direct-difference fallback
  SolveTrace trace;                    // non-convex path only
};

/// Two-stage training: compute eta_max, dispatch on the requested parameter's
/// side of it (convex nearest-point / boundary witness / local search), then
/// set the bias.
TrainedModel train(const Dataset& data, Family family, ParamSpec param,
                   const TrainConfig& cfg = {}, double shape_plus = 1.0,
                   double shape_minus = 1.0);

/// Same pipeline on a prebuilt family (used by tests and moment-specified
/// instances). eta_user is in normalized units; pass nullopt for Auto.
TrainedModel train_builder(const PairBuilder& builder,
                           std::optional<double> eta_user,
                           const TrainConfig& cfg = {});

/// b = -(x_plus + x_minus) . w / 2: boundary through the midpoint of the
/// inner minimizers.
double bias_midpoint(const Vector& x_plus, const Vector& x_minus,
                     const Vector& w);

/// Threshold scan over the m+1 midpoints of sorted projections minimizing
/// training 0-1 error; ties broken toward the largest margin.
double bias_best_threshold(const Dataset& data, const Vector& w);

/// sign(x . w + b), exact zero mapped to +1.
int predict(const TrainedModel& model, const Vector& x);

struct Metrics {
  double error_rate = 0.0;
  int tp = 0, fp = 0, tn = 0, fn = 0;
  bool empty = false;
};

Metrics evaluate(const TrainedModel& model, const Dataset& data);

/// kappa = sqrt((1 - eta)/eta) for a misclassification-rate bound eta.
double kappa_from_rate(double eta_rate);

/// alpha = kappa^2/(1 + kappa^2), inverse of kappa = sqrt(alpha/(1-alpha)).
double alpha_from_kappa(double kappa);

}  // namespace rcm
