#include "rcm/solver_nonconvex.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace rcm {

Matrix hyperplane_basis(const Vector& w_tilde) {
  const Eigen::Index d = w_tilde.size();
  Eigen::HouseholderQR<Matrix> qr(w_tilde);
  Matrix q = qr.householderQ();
  return q.rightCols(d - 1);
}

namespace {

double g_value(const PairSet& pair, const Vector& w) {
  return support_min_pair(pair, w).value;
}

// Concave 1-D maximization by sign bisection on the scalar supergradient.
double maximize_1d(const PairSet& pair, const Vector& w_tilde, const Vector& n,
                   const SubproblemConfig& cfg, int* iters) {
  auto slope = [&](double z) { return n.dot(support_min_pair(pair, w_tilde + z * n).minimizer); };
  auto value = [&](double z) { return g_value(pair, w_tilde + z * n); };
  int used = 0;
  const double s0 = slope(0.0);
  ++used;
  if (std::abs(s0) <= cfg.inner_tol) {
    if (iters) *iters = used;
    return 0.0;
  }
  const double dir = s0 > 0 ? 1.0 : -1.0;
  double step = 1.0, lo = 0.0, hi = 0.0;
  bool bracketed = false;
  while (used < cfg.max_steps) {
    const double z = dir * step;
    const double s = slope(z);
    ++used;
    if (s * dir <= 0) {  // slope flipped: maximizer inside
      lo = 0.0;
      hi = z;
      bracketed = true;
      break;
    }
    if (value(z) > cfg.unbounded_guard || step > 1e9)
      throw SubproblemUnbounded(
          "linearized subproblem escapes upward; origin not interior");
    step *= 2.0;
  }
  if (!bracketed) {
    if (iters) *iters = used;
    return dir * step;  // best effort at the iteration cap
  }
  // bisect on the slope sign; converges to the maximizer even at kinks
  for (int k = 0; k < 200 && used < cfg.max_steps; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double s = slope(mid);
    ++used;
    if (std::abs(hi - lo) <= 1e-15 * std::max(1.0, std::abs(hi))) break;
    if (s * dir > 0)
      lo = mid;
    else
      hi = mid;
  }
  if (iters) *iters = used;
  return 0.5 * (lo + hi);
}

// General reduced-space supergradient ascent with backtracking and a
// diminishing-step fallback; tracks the best point seen.
Vector maximize_nd(const PairSet& pair, const Vector& w_tilde, const Matrix& n,
                   const SubproblemConfig& cfg, int* iters) {
  const Eigen::Index k = n.cols();
  Vector z = Vector::Zero(k);
  Vector best_z = z;
  double best_val = g_value(pair, w_tilde);
  double t_init = 1.0;
  int used = 1;
  for (int it = 0; it < cfg.max_steps; ++it) {
    SupportResult r = support_min_pair(pair, w_tilde + n * z);
    if (r.value > cfg.unbounded_guard)
      throw SubproblemUnbounded(
          "linearized subproblem escapes upward; origin not interior");
    if (r.value > best_val) {
      best_val = r.value;
      best_z = z;
    }
    const Vector grad = n.transpose() * r.minimizer;
    const double gn = grad.norm();
    if (gn <= cfg.inner_tol) break;

    double t = t_init;
    bool accepted = false;
    while (t > 1e-16) {
      const Vector zc = z + t * grad;
      const double vc = g_value(pair, w_tilde + n * zc);
      ++used;
      if (vc >= r.value + 1e-4 * t * gn * gn) {
        z = zc;
        t_init = std::min(2.0 * t, 1e6);
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // nonsmooth kink: plain supergradient step with diminishing length
      const double step = 1.0 / std::sqrt(static_cast<double>(it) + 1.0);
      if (step * gn < 1e-14) break;
      z += (step / gn) * grad;
      t_init = 1.0;
    }
    ++used;
  }
  if (iters) *iters = used;
  return best_z;
}

}  // namespace

Vector linearized_subproblem(const PairSet& pair, const Vector& w_tilde,
                             const SubproblemConfig& cfg, int* iterations) {
  if (std::abs(w_tilde.norm() - 1.0) > 1e-8)
    throw InvalidDirection("linearized_subproblem: w_tilde must be unit norm");
  const Eigen::Index d = w_tilde.size();
  if (d == 1) {
    if (iterations) *iterations = 0;
    return w_tilde;  // the hyperplane is the single point w_tilde
  }
  const Matrix n = hyperplane_basis(w_tilde);
  if (d == 2) {
    const double z = maximize_1d(pair, w_tilde, n.col(0), cfg, iterations);
    return w_tilde + z * n.col(0);
  }
  const Vector z = maximize_nd(pair, w_tilde, n, cfg, iterations);
  return w_tilde + n * z;
}

namespace {

Vector initial_direction(const PairSet& pair, const LocalSearchConfig& cfg) {
  const Eigen::Index d = pair_dim(pair);
  Vector w;
  switch (cfg.start) {
    case LocalSearchConfig::Start::Given:
      w = cfg.start_direction;
      break;
    case LocalSearchConfig::Start::MeanDifference:
      w = pair_centroid(pair);
      break;
    case LocalSearchConfig::Start::RandomSeeded:
      w = Vector::Zero(d);
      break;
  }
  if (w.size() != d || w.norm() < 1e-12) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss;
    w = Vector::NullaryExpr(d, [&](Eigen::Index) { return gauss(rng); });
    if (w.norm() < 1e-12) w = Vector::Unit(d, 0);
  }
  return w / w.norm();
}

}  // namespace

LocalSearchResult local_search(const PairSet& pair,
                               const LocalSearchConfig& cfg) {
  if (cfg.epsilon <= 0)
    throw InvalidParameter("local_search: epsilon must be > 0");
  Vector w = initial_direction(pair, cfg);

  LocalSearchResult res;
  SubproblemConfig sub;
  sub.max_steps = cfg.inner_max_steps;
  sub.unbounded_guard = cfg.unbounded_guard;

  for (int t = 0; t < cfg.max_outer; ++t) {
    // loose inner solves far from the fixed point, x10 tighter per iteration
    sub.inner_tol = std::max(cfg.inner_tol, 1e-3 * std::pow(10.0, -t));
    int inner_iters = 0;
    Vector w_hat = linearized_subproblem(pair, w, sub, &inner_iters);
    if ((w - w_hat).norm() <= cfg.epsilon && sub.inner_tol > cfg.inner_tol) {
      // confirm the fixed point at the floor tolerance
      sub.inner_tol = cfg.inner_tol;
      int extra = 0;
      w_hat = linearized_subproblem(pair, w, sub, &extra);
      inner_iters += extra;
    }

    TraceRecord rec;
    rec.t = t;
    rec.w_tilde = w;
    rec.w_hat = w_hat;
    rec.g_tilde = g_value(pair, w);
    rec.step_norm = (w - w_hat).norm();
    rec.inner_iterations = inner_iters;
    res.trace.records.push_back(rec);

    if (rec.step_norm <= cfg.epsilon) {
      res.converged = true;
      break;
    }
    w = w_hat / w_hat.norm();
  }

  res.w_star = w;
  SupportResult final = support_min_pair(pair, w);
  res.value = final.value;
  res.per_class = final.per_class;
  return res;
}

bool is_ellipsoid_pair(const PairSet& pair) {
  if (const auto* p = std::get_if<ClassPair>(&pair))
    return std::holds_alternative<EllipsoidSet>(p->plus) &&
           std::holds_alternative<EllipsoidSet>(p->minus);
  return std::holds_alternative<EllipsoidSet>(
      std::get<DirectDiff>(pair).diff);
}

namespace {

Matrix hessian_term(const EllipsoidSet& e, const Vector& w) {
  const Eigen::Index d = w.size();
  if (e.radius == 0.0) return Matrix::Zero(d, d);
  const Matrix sigma = e.sqrt_cov * e.sqrt_cov;
  const double sn = (e.sqrt_cov * w).norm();
  if (sn <= 1e-10)
    throw NotDifferentiable("hessian_g: seminorm below threshold");
  const Vector sw = sigma * w;
  return -e.radius * (sigma / sn - (sw * sw.transpose()) / (sn * sn * sn));
}

}  // namespace

Matrix hessian_g(const PairSet& pair, const Vector& w) {
  if (!is_ellipsoid_pair(pair))
    throw NotDifferentiable("hessian_g: only ellipsoid-family pairs");
  if (const auto* p = std::get_if<ClassPair>(&pair)) {
    return hessian_term(std::get<EllipsoidSet>(p->plus), w) +
           hessian_term(std::get<EllipsoidSet>(p->minus), w);
  }
  return hessian_term(std::get<EllipsoidSet>(std::get<DirectDiff>(pair).diff),
                      w);
}

OptimalityReport local_optimality_check(const PairSet& pair,
                                        const Vector& w_star, double delta,
                                        int n_samples, std::uint64_t seed) {
  if (std::abs(w_star.norm() - 1.0) > 1e-8)
    throw InvalidDirection("local_optimality_check: w_star must be unit norm");
  const Eigen::Index d = w_star.size();
  OptimalityReport rep;
  rep.g_at_w = g_value(pair, w_star);

  if (d > 1) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double max_violation = 0.0;
    for (int i = 0; i < n_samples; ++i) {
      Vector v;
      do {
        v = Vector::NullaryExpr(d, [&](Eigen::Index) { return gauss(rng); });
        v -= v.dot(w_star) * w_star;
      } while (v.norm() < 1e-12);
      v /= v.norm();
      const double theta = delta * unif(rng);
      const Vector w = std::cos(theta) * w_star + std::sin(theta) * v;
      max_violation = std::max(max_violation, g_value(pair, w) - rep.g_at_w);
    }
    rep.max_violation = max_violation;
  }

  if (is_ellipsoid_pair(pair)) {
    try {
      const Matrix h = hessian_g(pair, w_star);
      // homogeneity forces a zero eigenvalue along w_star; the second-order
      // test lives on the tangent space {d : w_star . d = 0}
      if (d > 1) {
        const Matrix n = hyperplane_basis(w_star);
        const Matrix ht = n.transpose() * h * n;
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (ht + ht.transpose()),
                                                 Eigen::EigenvaluesOnly);
        rep.hessian_max_eig = es.eigenvalues().maxCoeff();
      } else {
        rep.hessian_max_eig = -std::numeric_limits<double>::infinity();
      }
      rep.hessian_test = rep.hessian_max_eig < rep.g_at_w;
    } catch (const NotDifferentiable&) {
      // leave hessian_test unset
    }
  }
  return rep;
}

}  // namespace rcm
