#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rcm/dataset.hpp"
#include "rcm/linalg.hpp"

namespace rcm {

/// First and second moments of one class, with the covariance square root
/// cached for the ellipsoidal support oracle.
struct ClassMoments {
  Vector mean;
  Matrix cov;       // population convention (1/m), plus ridge*I
  Matrix sqrt_cov;  // psd_sqrt(cov)
  double ridge = 0.0;
};

/// ridge*I added to a sample covariance so the square root is well defined;
/// relative convention: factor * trace(cov)/d.
double relative_ridge(const Matrix& cov, double factor = 1e-6);

/// Sample mean and (1/m)-normalized covariance of one class. `ridge` is the
/// absolute multiple of I added to the covariance.
ClassMoments estimate_moments(const Dataset& data, int label, double ridge);
ClassMoments moments_from(Vector mean, Matrix cov);

// ---------------------------------------------------------------------------
// Uncertainty-set families and their support (linear-minimization) oracle.

struct ConvexHullSet {
  std::vector<Vector> points;
};

/// Convex combinations with per-weight cap 2/(nu*m_total).
struct ReducedConvexHullSet {
  std::vector<Vector> points;
  double nu = 1.0;
  int m_total = 0;
  double cap() const { return 2.0 / (nu * m_total); }
};

/// { center + sqrt_cov * u : ||u|| <= radius }. Also used, with
/// center = mean difference and sqrt_cov = (cov_plus + cov_minus)^{1/2}, as
/// the direct difference-set of the discriminant-analysis family.
struct EllipsoidSet {
  Vector center;
  Matrix sqrt_cov;
  double radius = 0.0;
};

using UncertaintySet =
    std::variant<ConvexHullSet, ReducedConvexHullSet, EllipsoidSet>;

Eigen::Index set_dim(const UncertaintySet& set);

/// Mean of the set under the uniform-vertex convention for hulls, the center
/// for ellipsoids. Used for the default starting direction of the solvers.
Vector set_centroid(const UncertaintySet& set);

struct SupportResult {
  double value = 0.0;  // min over the set of x . w
  Vector minimizer;
  // populated when the query went through a two-class pair
  std::optional<std::pair<Vector, Vector>> per_class;
};

/// g(w) = min over the set of x . w. Exact per family: vertex scan for hulls,
/// fractional knapsack for reduced hulls (ties broken by ascending index),
/// closed form for ellipsoids.
SupportResult support_min(const UncertaintySet& set, const Vector& w);

/// Feasibility of the reduced-hull weight cap: cap * m_class >= 1.
bool rch_feasible(double nu, int m_class, int m_total);

// ---------------------------------------------------------------------------
// Minkowski-difference pairs.

struct ClassPair {
  UncertaintySet plus;
  UncertaintySet minus;
};

struct DirectDiff {
  UncertaintySet diff;
};

/// Either a (U+, U-) pair queried through the difference, or a directly
/// specified difference set.
using PairSet = std::variant<ClassPair, DirectDiff>;

Eigen::Index pair_dim(const PairSet& pair);

/// Support oracle of the Minkowski difference:
/// pair mode g(w) = g_plus(w) + g_minus(-w), minimizer x_plus - x_minus.
SupportResult support_min_pair(const PairSet& pair, const Vector& w);

/// Centroid difference (or direct centroid) of the pair.
Vector pair_centroid(const PairSet& pair);

// ---------------------------------------------------------------------------
// Parametrized family builder.
//
// All families are exposed through one normalized growth parameter eta >= 0
// in which sets grow with eta (inclusion-monotone): eta = kappa or zeta for
// the ellipsoidal families, and eta = nu_max - nu for reduced hulls (which
// grow as nu shrinks). Plain convex hulls carry no parameter.

enum class Family { ConvexHull, ReducedConvexHull, Ellipsoid, Fda };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

class PairBuilder {
 public:
  static PairBuilder convex_hull(std::vector<Vector> plus,
                                 std::vector<Vector> minus);
  static PairBuilder reduced_hull(std::vector<Vector> plus,
                                  std::vector<Vector> minus);
  /// shape_plus/minus scale the two radii: kappa_pm(eta) = eta * shape_pm.
  /// Symmetric MPM-style sets use the default (1, 1).
  static PairBuilder ellipsoid(ClassMoments plus, ClassMoments minus,
                               double shape_plus = 1.0,
                               double shape_minus = 1.0);
  static PairBuilder fda(const ClassMoments& plus, const ClassMoments& minus);

  /// Builds the family from data; ridge is the absolute covariance ridge
  /// (only used by the moment-based families).
  static PairBuilder from_dataset(const Dataset& data, Family family,
                                  double ridge, double shape_plus = 1.0,
                                  double shape_minus = 1.0);

  Family family() const { return family_; }
  Eigen::Index dim() const { return dim_; }
  bool parametrized() const { return family_ != Family::ConvexHull; }

  /// The set pair at normalized eta. Throws InvalidParameter outside
  /// [eta_lo, eta_hi]; for convex hulls only eta = 0 is valid.
  PairSet at(double eta) const;

  double eta_lo() const { return 0.0; }
  /// Largest valid normalized eta: nu_max - nu_floor for reduced hulls,
  /// unbounded (infinity) for the ellipsoidal families, 0 for hulls.
  double eta_hi() const;

  /// Reduced-hull bookkeeping.
  double nu_max() const;
  int m_total() const { return m_total_; }

  /// Family-native parameter <-> normalized eta. Native units: nu for
  /// reduced hulls (errors: InfeasibleRCH above nu_max, InvalidParameter
  /// at nu <= 0), max radius for ellipsoids, zeta for the direct family.
  double eta_from_native(double native) const;
  double native_from_eta(double eta) const;

  double shape_plus() const { return shape_plus_; }
  double shape_minus() const { return shape_minus_; }

  /// Class centroid difference, the default initial direction for solvers.
  Vector centroid_direction() const;

 private:
  PairBuilder() = default;

  Family family_ = Family::ConvexHull;
  Eigen::Index dim_ = 0;
  std::vector<Vector> plus_points_, minus_points_;
  ClassMoments plus_moments_, minus_moments_;
  Vector fda_center_;
  Matrix fda_sqrt_;
  double shape_plus_ = 1.0, shape_minus_ = 1.0;
  int m_total_ = 0;
  static constexpr double kNuFloor = 1e-6;
};

/// Free-function form of the builder: the pair at normalized eta.
inline PairSet scale_pair(const PairBuilder& builder, double eta) {
  return builder.at(eta);
}

}  // namespace rcm
