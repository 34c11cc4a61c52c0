#include "rcm/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rcm {

const char* bias_method_name(BiasMethod b) {
  return b == BiasMethod::Midpoint ? "midpoint" : "threshold";
}

BiasMethod bias_method_from_name(const std::string& name) {
  if (name == "midpoint") return BiasMethod::Midpoint;
  if (name == "threshold") return BiasMethod::BestThreshold;
  throw InvalidParameter("unknown bias method '" + name + "'");
}

double bias_midpoint(const Vector& x_plus, const Vector& x_minus,
                     const Vector& w) {
  return -(x_plus + x_minus).dot(w) / 2.0;
}

double bias_best_threshold(const Dataset& data, const Vector& w) {
  const int m = data.size();
  if (m == 0) return 0.0;
  std::vector<double> proj(m);
  for (int i = 0; i < m; ++i) proj[i] = data.x(i).dot(w);
  std::vector<double> sorted = proj;
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> candidates;
  candidates.push_back(sorted.front() - 1.0);  // -inf guard
  for (int i = 0; i + 1 < m; ++i)
    if (sorted[i + 1] > sorted[i])
      candidates.push_back(0.5 * (sorted[i] + sorted[i + 1]));
  candidates.push_back(sorted.back() + 1.0);  // +inf guard

  int best_errors = m + 1;
  double best_theta = 0.0, best_margin = -1.0;
  for (double theta : candidates) {
    int errors = 0;
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      const int pred = proj[i] - theta >= 0 ? +1 : -1;
      if (pred != data.y(i)) ++errors;
      margin = std::min(margin, std::abs(proj[i] - theta));
    }
    if (errors < best_errors ||
        (errors == best_errors && margin > best_margin + 1e-15)) {
      best_errors = errors;
      best_theta = theta;
      best_margin = margin;
    }
  }
  return -best_theta;
}

int predict(const TrainedModel& model, const Vector& x) {
  if (x.size() != model.w.size())
    throw DimensionError("predict: sample dimension mismatch");
  return x.dot(model.w) + model.b >= 0 ? +1 : -1;
}

Metrics evaluate(const TrainedModel& model, const Dataset& data) {
  Metrics m;
  if (data.size() == 0) {
    m.empty = true;
    return m;
  }
  for (int i = 0; i < data.size(); ++i) {
    const int pred = predict(model, data.x(i));
    if (data.y(i) == +1)
      pred == +1 ? ++m.tp : ++m.fn;
    else
      pred == -1 ? ++m.tn : ++m.fp;
  }
  m.error_rate = static_cast<double>(m.fp + m.fn) / data.size();
  return m;
}

double kappa_from_rate(double eta_rate) {
  if (!(eta_rate > 0.0 && eta_rate < 1.0))
    throw InvalidRate("kappa_from_rate: rate must lie in (0, 1)");
  return std::sqrt((1.0 - eta_rate) / eta_rate);
}

double alpha_from_kappa(double kappa) {
  if (kappa < 0)
    throw InvalidParameter("alpha_from_kappa: kappa must be >= 0");
  return kappa * kappa / (1.0 + kappa * kappa);
}

TrainedModel train_builder(const PairBuilder& builder,
                           std::optional<double> eta_user,
                           const TrainConfig& cfg) {
  TrainedModel model;
  model.family = builder.family();

  double eta = 0.0;
  EtaMaxResult em;
  if (!builder.parametrized()) {
    em.status = EtaMaxStatus::NotApplicable;
    model.param = std::numeric_limits<double>::quiet_NaN();
  } else {
    em = eta_max_auto(builder, cfg.eta_cfg);
    model.eta_max_status = em.status;
    if (em.status == EtaMaxStatus::Found ||
        em.status == EtaMaxStatus::AlwaysIntersects)
      model.eta_max_native = builder.native_from_eta(em.eta_max);
    if (eta_user) {
      eta = *eta_user;
      if (eta < builder.eta_lo() || eta > builder.eta_hi() + 1e-12)
        throw InvalidParameter("train: parameter outside the family range");
    } else {
      if (em.status == EtaMaxStatus::NeverIntersects)
        throw InvalidParameter(
            "train: auto parameter undefined, the sets never intersect "
            "within the family range");
      eta = em.eta_max;
    }
    model.param = builder.native_from_eta(eta);
    if (builder.family() == Family::Ellipsoid) {
      model.kappa_plus = eta * builder.shape_plus();
      model.kappa_minus = eta * builder.shape_minus();
    }
  }

  const PairSet pair = builder.at(eta);
  const bool below = em.status == EtaMaxStatus::NotApplicable ||
                     em.status == EtaMaxStatus::NeverIntersects ||
                     (em.status == EtaMaxStatus::Found &&
                      eta < em.eta_max - cfg.boundary_tol);
  const bool boundary =
      (em.status == EtaMaxStatus::Found &&
       std::abs(eta - em.eta_max) <= cfg.boundary_tol) ||
      (em.status == EtaMaxStatus::AlwaysIntersects && eta <= cfg.boundary_tol);

  if (below || em.status == EtaMaxStatus::NotApplicable) {
    NearestPointResult np = nearest_point(pair, cfg.np_tol, cfg.np_max_iter);
    if (np.distance > cfg.eta_cfg.member_tol) {
      model.w = np.x_star / np.distance;
      model.w /= model.w.norm();
      model.g_value = np.distance;
      model.per_class = np.per_class;
      model.regime = classify_regime(np.distance, cfg.boundary_tol);
    } else if (em.status == EtaMaxStatus::NotApplicable) {
      // unparametrized hulls that overlap: straight to the local search
      LocalSearchConfig ls = cfg.search;
      LocalSearchResult r = local_search(pair, ls);
      model.w = r.w_star;
      model.g_value = r.value;
      model.per_class = r.per_class;
      model.trace = std::move(r.trace);
      model.regime = classify_regime(r.value, cfg.boundary_tol);
    } else {
      throw NotSeparated(
          "train: sets intersect below eta_max; inconsistent bisection");
    }
  } else if (boundary) {
    // the bisection witness carries the touching direction
    if (em.witness_x.size() == 0)
      throw NotSeparated("train: no boundary witness available");
    model.w = em.witness_x / em.witness_x.norm();
    NearestPointResult np = nearest_point(pair, cfg.np_tol, cfg.np_max_iter);
    model.g_value = np.distance;
    model.per_class = em.witness_per_class;
    model.regime = classify_regime(model.g_value, cfg.boundary_tol);
  } else {
    LocalSearchConfig ls = cfg.search;
    LocalSearchResult r = local_search(pair, ls);
    model.w = r.w_star;
    model.g_value = r.value;
    model.per_class = r.per_class;
    model.trace = std::move(r.trace);
    model.regime = classify_regime(r.value, cfg.boundary_tol);
  }

  // bias
  model.bias_method = cfg.bias;
  if (model.per_class) {
    model.b = bias_midpoint(model.per_class->first, model.per_class->second,
                            model.w);
  } else {
    // direct-difference family: no per-class minimizers; train() replaces
    // this with the projected class-mean midpoint when samples are available
    model.bias_from_class_means = true;
    model.b = 0.0;
  }
  return model;
}

TrainedModel train(const Dataset& data, Family family, ParamSpec param,
                   const TrainConfig& cfg, double shape_plus,
                   double shape_minus) {
  data.require_both_classes();
  double ridge = 0.0;
  if (family == Family::Ellipsoid || family == Family::Fda) {
    // relative ridge from the pooled raw covariances
    const ClassMoments raw_p = estimate_moments(data, +1, 0.0);
    const ClassMoments raw_m = estimate_moments(data, -1, 0.0);
    ridge = std::max(relative_ridge(raw_p.cov, cfg.ridge_factor),
                     relative_ridge(raw_m.cov, cfg.ridge_factor));
    if (ridge <= 0)  // degenerate single-point classes still need a sqrt
      ridge = cfg.ridge_factor;
  }
  PairBuilder builder =
      PairBuilder::from_dataset(data, family, ridge, shape_plus, shape_minus);

  std::optional<double> eta_user;
  if (!param.is_auto && builder.parametrized())
    eta_user = builder.eta_from_native(param.value);

  TrainedModel model = train_builder(builder, eta_user, cfg);

  if (model.bias_from_class_means && cfg.bias == BiasMethod::Midpoint) {
    const Vector mp = estimate_moments(data, +1, 0.0).mean;
    const Vector mm = estimate_moments(data, -1, 0.0).mean;
    model.b = bias_midpoint(mp, mm, model.w);
  }
  if (cfg.bias == BiasMethod::BestThreshold) {
    model.b = bias_best_threshold(data, model.w);
    model.bias_method = BiasMethod::BestThreshold;
  }
  return model;
}

}  // namespace rcm
