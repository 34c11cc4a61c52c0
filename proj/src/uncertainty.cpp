#include "rcm/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rcm {

double relative_ridge(const Matrix& cov, double factor) {
  if (cov.rows() == 0) return 0.0;
  return factor * cov.trace() / static_cast<double>(cov.rows());
}

ClassMoments estimate_moments(const Dataset& data, int label, double ridge) {
  if (ridge < 0) throw InvalidParameter("estimate_moments: ridge must be >= 0");
  const auto pts = data.points_of(label);
  if (pts.empty())
    throw EmptyClass("estimate_moments: class " + std::to_string(label) +
                     " has no samples");
  const auto d = pts.front().size();
  Vector mean = Vector::Zero(d);
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  Matrix cov = Matrix::Zero(d, d);
  for (const auto& p : pts) {
    const Vector c = p - mean;
    cov += c * c.transpose();
  }
  cov /= static_cast<double>(pts.size());
  cov += ridge * Matrix::Identity(d, d);
  ClassMoments m;
  m.mean = std::move(mean);
  m.cov = cov;
  m.sqrt_cov = linalg::psd_sqrt(cov);
  m.ridge = ridge;
  return m;
}

ClassMoments moments_from(Vector mean, Matrix cov) {
  ClassMoments m;
  m.sqrt_cov = linalg::psd_sqrt(cov);
  m.mean = std::move(mean);
  m.cov = std::move(cov);
  return m;
}

Eigen::Index set_dim(const UncertaintySet& set) {
  return std::visit(
      [](const auto& s) -> Eigen::Index {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, EllipsoidSet>)
          return s.center.size();
        else
          return s.points.empty() ? 0 : s.points.front().size();
      },
      set);
}

Vector set_centroid(const UncertaintySet& set) {
  return std::visit(
      [](const auto& s) -> Vector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, EllipsoidSet>) {
          return s.center;
        } else {
          Vector c = Vector::Zero(s.points.front().size());
          for (const auto& p : s.points) c += p;
          return c / static_cast<double>(s.points.size());
        }
      },
      set);
}

bool rch_feasible(double nu, int m_class, int m_total) {
  if (nu <= 0) throw InvalidParameter("rch_feasible: nu must be > 0");
  return nu <= 2.0 * m_class / m_total + 1e-12;
}

namespace {

SupportResult support_convex_hull(const ConvexHullSet& s, const Vector& w) {
  if (s.points.empty()) throw InvalidParameter("support_min: empty hull");
  std::size_t best = 0;
  double best_val = s.points[0].dot(w);
  for (std::size_t i = 1; i < s.points.size(); ++i) {
    const double v = s.points[i].dot(w);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  SupportResult r;
  r.minimizer = s.points[best];
  r.value = best_val;
  return r;
}

SupportResult support_reduced_hull(const ReducedConvexHullSet& s,
                                   const Vector& w) {
  const int n = static_cast<int>(s.points.size());
  if (n == 0) throw InvalidParameter("support_min: empty reduced hull");
  const double cap = s.cap();
  if (cap * n < 1.0 - 1e-12)
    throw InfeasibleRCH("support_min: cap * n = " + std::to_string(cap * n) +
                        " < 1, reduced hull is empty");
  // Fractional knapsack on the capped simplex: fill the smallest projections
  // first, ties broken by ascending sample index.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> proj(n);
  for (int i = 0; i < n; ++i) proj[i] = s.points[i].dot(w);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return proj[a] < proj[b]; });
  Vector minimizer = Vector::Zero(s.points.front().size());
  double remaining = 1.0;
  for (int idx : order) {
    const double take = std::min(cap, remaining);
    minimizer += take * s.points[idx];
    remaining -= take;
    if (remaining <= 0) break;
  }
  SupportResult r;
  r.value = minimizer.dot(w);
  r.minimizer = std::move(minimizer);
  return r;
}

SupportResult support_ellipsoid(const EllipsoidSet& s, const Vector& w) {
  const Vector sw = s.sqrt_cov * w;
  const double seminorm = sw.norm();
  SupportResult r;
  if (seminorm <= 0.0 || s.radius == 0.0) {
    r.minimizer = s.center;
    r.value = s.center.dot(w);
    return r;
  }
  r.value = s.center.dot(w) - s.radius * seminorm;
  r.minimizer = s.center - (s.radius / seminorm) * (s.sqrt_cov * sw);
  return r;
}

}  // namespace

SupportResult support_min(const UncertaintySet& set, const Vector& w) {
  if (!w.allFinite())
    throw InvalidParameter("support_min: direction has non-finite entries");
  if (w.size() != set_dim(set))
    throw DimensionError("support_min: dimension mismatch");
  return std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConvexHullSet>)
          return support_convex_hull(s, w);
        else if constexpr (std::is_same_v<T, ReducedConvexHullSet>)
          return support_reduced_hull(s, w);
        else
          return support_ellipsoid(s, w);
      },
      set);
}

Eigen::Index pair_dim(const PairSet& pair) {
  if (const auto* p = std::get_if<ClassPair>(&pair)) return set_dim(p->plus);
  return set_dim(std::get<DirectDiff>(pair).diff);
}

SupportResult support_min_pair(const PairSet& pair, const Vector& w) {
  if (const auto* p = std::get_if<ClassPair>(&pair)) {
    SupportResult rp = support_min(p->plus, w);
    SupportResult rm = support_min(p->minus, -w);
    SupportResult r;
    r.value = rp.value + rm.value;
    r.minimizer = rp.minimizer - rm.minimizer;
    r.per_class = {std::move(rp.minimizer), std::move(rm.minimizer)};
    return r;
  }
  return support_min(std::get<DirectDiff>(pair).diff, w);
}

Vector pair_centroid(const PairSet& pair) {
  if (const auto* p = std::get_if<ClassPair>(&pair))
    return set_centroid(p->plus) - set_centroid(p->minus);
  return set_centroid(std::get<DirectDiff>(pair).diff);
}

// ---------------------------------------------------------------------------

std::string family_name(Family f) {
  switch (f) {
    case Family::ConvexHull: return "ch";
    case Family::ReducedConvexHull: return "rch";
    case Family::Ellipsoid: return "ellipsoid";
    case Family::Fda: return "fda";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "ch") return Family::ConvexHull;
  if (name == "rch") return Family::ReducedConvexHull;
  if (name == "ellipsoid") return Family::Ellipsoid;
  if (name == "fda") return Family::Fda;
  throw InvalidParameter("unknown family '" + name + "'");
}

PairBuilder PairBuilder::convex_hull(std::vector<Vector> plus,
                                     std::vector<Vector> minus) {
  if (plus.empty() || minus.empty())
    throw EmptyClass("PairBuilder: hull needs points in both classes");
  PairBuilder b;
  b.family_ = Family::ConvexHull;
  b.dim_ = plus.front().size();
  b.m_total_ = static_cast<int>(plus.size() + minus.size());
  b.plus_points_ = std::move(plus);
  b.minus_points_ = std::move(minus);
  return b;
}

PairBuilder PairBuilder::reduced_hull(std::vector<Vector> plus,
                                      std::vector<Vector> minus) {
  PairBuilder b = convex_hull(std::move(plus), std::move(minus));
  b.family_ = Family::ReducedConvexHull;
  return b;
}

PairBuilder PairBuilder::ellipsoid(ClassMoments plus, ClassMoments minus,
                                   double shape_plus, double shape_minus) {
  if (shape_plus < 0 || shape_minus < 0 ||
      std::max(shape_plus, shape_minus) <= 0)
    throw InvalidParameter("PairBuilder: radius shape must be >= 0, max > 0");
  PairBuilder b;
  b.family_ = Family::Ellipsoid;
  b.dim_ = plus.mean.size();
  // normalize so eta is the larger of the two radii
  const double s = std::max(shape_plus, shape_minus);
  b.shape_plus_ = shape_plus / s;
  b.shape_minus_ = shape_minus / s;
  b.plus_moments_ = std::move(plus);
  b.minus_moments_ = std::move(minus);
  return b;
}

PairBuilder PairBuilder::fda(const ClassMoments& plus,
                             const ClassMoments& minus) {
  PairBuilder b;
  b.family_ = Family::Fda;
  b.dim_ = plus.mean.size();
  b.fda_center_ = plus.mean - minus.mean;
  b.fda_sqrt_ = linalg::psd_sqrt(plus.cov + minus.cov);
  return b;
}

PairBuilder PairBuilder::from_dataset(const Dataset& data, Family family,
                                      double ridge, double shape_plus,
                                      double shape_minus) {
  data.require_both_classes();
  switch (family) {
    case Family::ConvexHull:
      return convex_hull(data.points_of(+1), data.points_of(-1));
    case Family::ReducedConvexHull:
      return reduced_hull(data.points_of(+1), data.points_of(-1));
    case Family::Ellipsoid:
      return ellipsoid(estimate_moments(data, +1, ridge),
                       estimate_moments(data, -1, ridge), shape_plus,
                       shape_minus);
    case Family::Fda:
      return fda(estimate_moments(data, +1, ridge),
                 estimate_moments(data, -1, ridge));
  }
  throw InvalidParameter("from_dataset: unknown family");
}

double PairBuilder::eta_hi() const {
  switch (family_) {
    case Family::ConvexHull: return 0.0;
    case Family::ReducedConvexHull: return nu_max() - kNuFloor;
    default: return std::numeric_limits<double>::infinity();
  }
}

double PairBuilder::nu_max() const {
  if (family_ != Family::ReducedConvexHull)
    throw InvalidParameter("nu_max: not a reduced-hull family");
  const int mp = static_cast<int>(plus_points_.size());
  const int mm = static_cast<int>(minus_points_.size());
  return 2.0 * std::min(mp, mm) / m_total_;
}

double PairBuilder::eta_from_native(double native) const {
  switch (family_) {
    case Family::ConvexHull:
      throw InvalidParameter("eta_from_native: hull family has no parameter");
    case Family::ReducedConvexHull: {
      if (native <= 0)
        throw InvalidParameter("nu must be > 0");
      if (native > nu_max() + 1e-12)
        throw InfeasibleRCH("nu = " + std::to_string(native) +
                            " exceeds nu_max = " + std::to_string(nu_max()));
      return std::max(0.0, nu_max() - native);
    }
    default:
      if (native < 0) throw InvalidParameter("radius must be >= 0");
      return native;
  }
}

double PairBuilder::native_from_eta(double eta) const {
  switch (family_) {
    case Family::ConvexHull:
      throw InvalidParameter("native_from_eta: hull family has no parameter");
    case Family::ReducedConvexHull: return nu_max() - eta;
    default: return eta;
  }
}

PairSet PairBuilder::at(double eta) const {
  if (!(eta >= 0))
    throw InvalidParameter("scale_pair: eta must be >= 0");
  switch (family_) {
    case Family::ConvexHull: {
      if (eta != 0.0)
        throw InvalidParameter("scale_pair: hull family has no parameter");
      return ClassPair{ConvexHullSet{plus_points_},
                       ConvexHullSet{minus_points_}};
    }
    case Family::ReducedConvexHull: {
      const double nu = nu_max() - eta;
      if (nu <= 0)
        throw InvalidParameter("scale_pair: eta beyond the reduced-hull range");
      return ClassPair{ReducedConvexHullSet{plus_points_, nu, m_total_},
                       ReducedConvexHullSet{minus_points_, nu, m_total_}};
    }
    case Family::Ellipsoid: {
      return ClassPair{
          EllipsoidSet{plus_moments_.mean, plus_moments_.sqrt_cov,
                       eta * shape_plus_},
          EllipsoidSet{minus_moments_.mean, minus_moments_.sqrt_cov,
                       eta * shape_minus_}};
    }
    case Family::Fda:
      return DirectDiff{EllipsoidSet{fda_center_, fda_sqrt_, eta}};
  }
  throw InvalidParameter("scale_pair: unknown family");
}

Vector PairBuilder::centroid_direction() const {
  switch (family_) {
    case Family::ConvexHull:
    case Family::ReducedConvexHull: {
      Vector cp = Vector::Zero(dim_), cm = Vector::Zero(dim_);
      for (const auto& p : plus_points_) cp += p;
      for (const auto& p : minus_points_) cm += p;
      return cp / static_cast<double>(plus_points_.size()) -
             cm / static_cast<double>(minus_points_.size());
    }
    case Family::Ellipsoid:
      return plus_moments_.mean - minus_moments_.mean;
    case Family::Fda:
      return fda_center_;
  }
  throw InvalidParameter("centroid_direction: unknown family");
}

}  // namespace rcm
