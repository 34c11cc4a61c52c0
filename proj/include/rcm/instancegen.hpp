#pragma once

// Seeded random instance generators shared by the verification suites and
// the test binaries.

#include <cstdint>
#include <random>
#include <vector>

#include "rcm/dataset.hpp"
#include "rcm/statcheck.hpp"
#include "rcm/uncertainty.hpp"

namespace rcm::gen {

using Rng = std::mt19937_64;

inline Vector random_unit(Rng& rng, Eigen::Index d) {
  std::normal_distribution<double> gauss;
  Vector v;
  do {
    v = Vector::NullaryExpr(d, [&](Eigen::Index) { return gauss(rng); });
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

inline Vector random_vector(Rng& rng, Eigen::Index d, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vector::NullaryExpr(d, [&](Eigen::Index) { return u(rng); });
}

/// B B^T / d + floor * I; well conditioned for floor around 0.1.
inline Matrix random_spd(Rng& rng, Eigen::Index d, double floor = 0.1) {
  std::normal_distribution<double> gauss;
  Matrix b = Matrix::NullaryExpr(d, d, [&](Eigen::Index, Eigen::Index) {
    return gauss(rng);
  });
  Matrix s = b * b.transpose() / static_cast<double>(d) +
             floor * Matrix::Identity(d, d);
  return 0.5 * (s + s.transpose());
}

inline ClassMoments random_moments(Rng& rng, Eigen::Index d,
                                   double mean_scale = 2.0,
                                   double cov_floor = 0.1) {
  return moments_from(random_vector(rng, d, mean_scale),
                      random_spd(rng, d, cov_floor));
}

inline std::vector<Vector> random_points(Rng& rng, Eigen::Index d, int n,
                                         const Vector& center, double spread) {
  std::uniform_real_distribution<double> u(-spread, spread);
  std::vector<Vector> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i)
    pts.push_back(center + Vector::NullaryExpr(
                               d, [&](Eigen::Index) { return u(rng); }));
  return pts;
}

/// Two blobs separated by `separation` along a random direction.
inline Dataset blob_dataset(Rng& rng, Eigen::Index d, int m_plus, int m_minus,
                            double separation, double spread = 1.0) {
  const Vector axis = random_unit(rng, d);
  Dataset data;
  for (const auto& p :
       random_points(rng, d, m_plus, (separation / 2) * axis, spread))
    data.add(p, +1);
  for (const auto& p :
       random_points(rng, d, m_minus, (-separation / 2) * axis, spread))
    data.add(p, -1);
  return data;
}

/// A random family instance of the requested kind in dimension d, with class
/// sets close enough that the full parameter range (both regimes) is
/// reachable: hull families overlap at small nu, moment families at a finite
/// radius.
inline PairBuilder random_builder(Rng& rng, Family family, Eigen::Index d = 2,
                                  double separation = 2.0) {
  switch (family) {
    case Family::ConvexHull:
    case Family::ReducedConvexHull: {
      std::uniform_int_distribution<int> npts(3, 6);
      const Vector axis = random_unit(rng, d);
      auto plus =
          random_points(rng, d, npts(rng), (separation / 2) * axis, 1.5);
      auto minus =
          random_points(rng, d, npts(rng), (-separation / 2) * axis, 1.5);
      return family == Family::ConvexHull
                 ? PairBuilder::convex_hull(std::move(plus), std::move(minus))
                 : PairBuilder::reduced_hull(std::move(plus),
                                             std::move(minus));
    }
    case Family::Ellipsoid: {
      const Vector axis = random_unit(rng, d);
      ClassMoments p = random_moments(rng, d, 0.5);
      ClassMoments m = random_moments(rng, d, 0.5);
      p.mean += (separation / 2) * axis;
      m.mean -= (separation / 2) * axis;
      return PairBuilder::ellipsoid(std::move(p), std::move(m));
    }
    case Family::Fda: {
      const Vector axis = random_unit(rng, d);
      ClassMoments p = random_moments(rng, d, 0.5);
      ClassMoments m = random_moments(rng, d, 0.5);
      p.mean += (separation / 2) * axis;
      m.mean -= (separation / 2) * axis;
      return PairBuilder::fda(p, m);
    }
  }
  throw InvalidParameter("random_builder: unknown family");
}

/// Discrete-distribution family for the worst-case loss checks: member means
/// stay within `mean_scatter` of a family center sampled on a norm annulus,
/// support points within `spread` of each mean, so the means-based Taylor
/// radius dominates the effective spread.
inline std::vector<DiscreteDistribution> random_discrete_family(
    Rng& rng, Eigen::Index d, const Vector& center, int max_members = 3,
    int max_support = 4, double mean_scatter = 0.3, double spread = 0.4) {
  std::uniform_int_distribution<int> nmem(1, max_members);
  std::uniform_int_distribution<int> nsup(1, max_support);
  std::uniform_real_distribution<double> uw(0.1, 1.0);
  std::vector<DiscreteDistribution> fam;
  const int members = nmem(rng);
  for (int i = 0; i < members; ++i) {
    const Vector mean_target = center + random_vector(rng, d, mean_scatter);
    DiscreteDistribution p;
    const int support = nsup(rng);
    double total = 0;
    for (int j = 0; j < support; ++j) {
      p.support.push_back(mean_target + random_vector(rng, d, spread));
      p.weights.push_back(uw(rng));
      total += p.weights.back();
    }
    for (auto& w : p.weights) w /= total;
    // recenter the support so the mean is exactly mean_target
    const Vector shift = mean_target - p.mean();
    for (auto& s : p.support) s += shift;
    fam.push_back(std::move(p));
  }
  return fam;
}

}  // namespace rcm::gen
