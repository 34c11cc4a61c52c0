#include "rcm/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "rcm/linalg.hpp"

namespace rcm::oracle {

GridSolveResult grid_sphere_solve(const PairSet& pair, int resolution) {
  const Eigen::Index d = pair_dim(pair);
  if (d > 3) throw DimensionTooLarge("grid_sphere_solve: d must be <= 3");
  if (d == 2 && resolution < 360)
    throw InvalidParameter("grid_sphere_solve: resolution >= 360 for d = 2");

  std::vector<Vector> grid;
  if (d == 1) {
    grid.push_back(Vector::Constant(1, 1.0));
    grid.push_back(Vector::Constant(1, -1.0));
  } else if (d == 2) {
    grid.reserve(resolution);
    for (int i = 0; i < resolution; ++i) {
      const double theta = 2.0 * std::numbers::pi * i / resolution;
      Vector w(2);
      w << std::cos(theta), std::sin(theta);
      grid.push_back(std::move(w));
    }
  } else {
    // Fibonacci sphere
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    grid.reserve(resolution);
    for (int i = 0; i < resolution; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / resolution;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i;
      Vector w(3);
      w << r * std::cos(phi), r * std::sin(phi), z;
      grid.push_back(std::move(w));
    }
  }

  GridSolveResult res;
  res.grid_resolution = static_cast<int>(grid.size());
  res.value = -std::numeric_limits<double>::infinity();
  for (const auto& w : grid) {
    const double v = support_min_pair(pair, w).value;
    if (v > res.value) {
      res.value = v;
      res.w_best = w;
    }
  }
  return res;
}

namespace {

struct HullView {
  const std::vector<Vector>* points = nullptr;
  double cap = 1.0;
};

HullView hull_view(const UncertaintySet& set) {
  HullView v;
  if (const auto* ch = std::get_if<ConvexHullSet>(&set)) {
    v.points = &ch->points;
    v.cap = 1.0;
  } else if (const auto* rch = std::get_if<ReducedConvexHullSet>(&set)) {
    v.points = &rch->points;
    v.cap = rch->cap();
  } else {
    throw InvalidParameter("grid_nearest_point: hull families only");
  }
  if (v.points->size() > 3)
    throw TooLarge("grid_nearest_point: at most 3 points per class");
  return v;
}

// All points of the capped simplex on a weight grid of the given step, with
// the cap breakpoints added so the extreme points are enumerated exactly.
std::vector<Vector> enumerate_hull(const HullView& h, double step) {
  const int n = static_cast<int>(std::lround(1.0 / step));
  const int k = static_cast<int>(h.points->size());
  const auto& pts = *h.points;
  std::vector<double> cand;
  for (int i = 0; i <= n; ++i)
    if (double(i) / n <= h.cap + 1e-12) cand.push_back(double(i) / n);
  for (double v : {h.cap, 1.0 - h.cap, 1.0 - 2.0 * h.cap})
    if (v >= 0.0 && v <= h.cap + 1e-12) cand.push_back(v);

  std::vector<Vector> out;
  auto emit = [&](double l1, double l2, double l3) {
    if (l1 > h.cap + 1e-12 || l2 > h.cap + 1e-12 || l3 > h.cap + 1e-12) return;
    if (l1 < -1e-12 || l2 < -1e-12 || l3 < -1e-12) return;
    Vector x = l1 * pts[0];
    if (k > 1) x += l2 * pts[1];
    if (k > 2) x += l3 * pts[2];
    out.push_back(std::move(x));
  };
  if (k == 1) {
    emit(1.0, 0, 0);
  } else if (k == 2) {
    for (double l1 : cand) emit(l1, 1.0 - l1, 0);
  } else {
    for (double l1 : cand)
      for (double l2 : cand) emit(l1, l2, 1.0 - l1 - l2);
  }
  return out;
}

}  // namespace

GridNearestResult grid_nearest_point(const PairSet& pair, double lambda_step) {
  if (lambda_step > 0.02 + 1e-15 || lambda_step <= 0)
    throw InvalidParameter("grid_nearest_point: lambda_step must be in (0, 0.02]");
  const auto* p = std::get_if<ClassPair>(&pair);
  if (!p) throw InvalidParameter("grid_nearest_point: needs a class pair");
  const auto plus = enumerate_hull(hull_view(p->plus), lambda_step);
  const auto minus = enumerate_hull(hull_view(p->minus), lambda_step);

  GridNearestResult res;
  res.distance = std::numeric_limits<double>::infinity();
  for (const auto& xp : plus) {
    for (const auto& xm : minus) {
      const double dist = (xp - xm).norm();
      if (dist < res.distance) {
        res.distance = dist;
        res.x_plus = xp;
        res.x_minus = xm;
      }
    }
  }
  return res;
}

std::pair<Vector, double> fda_closed_form(const ClassMoments& plus,
                                          const ClassMoments& minus) {
  const Vector diff = plus.mean - minus.mean;
  const Matrix sum = plus.cov + minus.cov;
  if (diff.norm() == 0.0)
    return {Vector::Unit(diff.size(), 0), 0.0};
  const Vector dir = linalg::solve_spd(sum, diff);  // throws NotSPD
  const double zeta_max = std::sqrt(diff.dot(dir));
  return {dir / dir.norm(), zeta_max};
}

double mpm_kappa_closed_form(const ClassMoments& plus,
                             const ClassMoments& minus, double tol) {
  const Vector a = plus.mean - minus.mean;
  const Eigen::Index d = a.size();
  if (a.norm() <= 1e-14)
    throw DegenerateMeans("mpm_kappa_closed_form: coincident means");

  const Matrix sp = plus.sqrt_cov, sm = minus.sqrt_cov;
  const Matrix sig_p = sp * sp, sig_m = sm * sm;
  auto h = [&](const Vector& w) {
    return (sp * w).norm() + (sm * w).norm();
  };
  auto grad = [&](const Vector& w) -> Vector {
    return sig_p * w / (sp * w).norm() + sig_m * w / (sm * w).norm();
  };

  const Vector w0 = a / a.squaredNorm();  // least-norm point of a.w = 1
  if (d == 1) return 1.0 / h(w0);

  // orthonormal basis of the constraint's direction space
  Eigen::HouseholderQR<Matrix> qr(a);
  const Matrix n = Matrix(qr.householderQ()).rightCols(d - 1);

  Vector z = Vector::Zero(d - 1);
  double t_init = 1.0;
  for (int it = 0; it < 20000; ++it) {
    const Vector w = w0 + n * z;
    const Vector g = n.transpose() * grad(w);
    if (g.norm() <= tol) break;
    double t = t_init;
    const double f0 = h(w);
    bool moved = false;
    while (t > 1e-18) {
      const Vector zc = z - t * g;
      if (h(w0 + n * zc) <= f0 - 1e-4 * t * g.squaredNorm()) {
        z = zc;
        t_init = std::min(2.0 * t, 1e6);
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }
  return 1.0 / h(w0 + n * z);
}

}  // namespace rcm::oracle
