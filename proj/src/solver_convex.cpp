#include "rcm/solver_convex.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "rcm/solver_nonconvex.hpp"

namespace rcm {

namespace {

// One support atom of the difference set with its class decomposition.
struct Atom {
  Vector v;
  Vector plus, minus;  // empty for direct difference sets
};

// Weight-transfer housekeeping: while the atoms are affinely dependent, move
// weight along a null-space direction of [V; 1^T] until one hits zero and
// drop it. The combination x is unchanged, so descent is unaffected.
void reduce_to_affine_independence(std::vector<Atom>& atoms,
                                   std::vector<double>& lambda,
                                   Eigen::Index d) {
  while (atoms.size() > 1) {
    const int k = static_cast<int>(atoms.size());
    Matrix a(d + 1, k);
    for (int i = 0; i < k; ++i) {
      a.col(i).head(d) = atoms[static_cast<std::size_t>(i)].v;
      a(d, i) = 1.0;
    }
    Eigen::FullPivLU<Matrix> lu(a);
    lu.setThreshold(1e-12);
    if (lu.dimensionOfKernel() == 0) return;
    Vector c = lu.kernel().col(0);
    c /= c.norm();
    if (c.maxCoeff() <= 0) c = -c;
    double theta = std::numeric_limits<double>::infinity();
    int drop = -1;
    for (int i = 0; i < k; ++i) {
      if (c[i] > 1e-14 &&
          lambda[static_cast<std::size_t>(i)] / c[i] < theta) {
        theta = lambda[static_cast<std::size_t>(i)] / c[i];
        drop = i;
      }
    }
    if (drop < 0) return;
    for (int i = 0; i < k; ++i)
      lambda[static_cast<std::size_t>(i)] =
          std::max(lambda[static_cast<std::size_t>(i)] - theta * c[i], 0.0);
    atoms.erase(atoms.begin() + drop);
    lambda.erase(lambda.begin() + drop);
  }
}

// Min-norm point over the affine hull of the atoms: solve the bordered
// system [G 1; 1^T 0] [alpha; mu] = [0; 1], G = V^T V. Affinely dependent
// atom sets make the system singular but still consistent; the least-squares
// fallback picks one valid representation.
bool affine_min_norm(const std::vector<Atom>& atoms, Vector& alpha) {
  const int k = static_cast<int>(atoms.size());
  Matrix kkt = Matrix::Zero(k + 1, k + 1);
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j)
      kkt(i, j) = kkt(j, i) =
          atoms[static_cast<std::size_t>(i)].v.dot(
              atoms[static_cast<std::size_t>(j)].v);
    kkt(i, k) = kkt(k, i) = 1.0;
  }
  Vector rhs = Vector::Zero(k + 1);
  rhs[k] = 1.0;
  Eigen::FullPivLU<Matrix> lu(kkt);
  Vector sol;
  if (lu.isInvertible()) {
    sol = lu.solve(rhs);
  } else {
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(kkt);
    sol = cod.solve(rhs);
    const double scale = std::max(1.0, kkt.cwiseAbs().maxCoeff());
    if ((kkt * sol - rhs).cwiseAbs().maxCoeff() > 1e-9 * scale) return false;
  }
  if (!sol.allFinite()) return false;
  alpha = sol.head(k);
  return true;
}

}  // namespace

NearestPointResult nearest_point(const PairSet& pair, double tol,
                                 int max_iter) {
  if (tol <= 0) throw InvalidParameter("nearest_point: tol must be > 0");
  const Eigen::Index d = pair_dim(pair);
  const bool track_classes = std::holds_alternative<ClassPair>(pair);
  const double gap_tol = tol * tol;

  auto lmo = [&](const Vector& w) { return support_min_pair(pair, w); };

  // Start from the support atom at the centroid-difference direction (any
  // fixed direction works; this one is deterministic and well scaled).
  Vector w0 = pair_centroid(pair);
  if (w0.norm() < 1e-14) w0 = Vector::Unit(d, 0);
  SupportResult first = lmo(w0);

  std::vector<Atom> atoms;
  std::vector<double> lambda;
  auto push_atom = [&](const SupportResult& r) -> int {
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if ((atoms[i].v - r.minimizer).lpNorm<Eigen::Infinity>() <= 1e-14)
        return -1;  // duplicate
    Atom a;
    a.v = r.minimizer;
    if (r.per_class) {
      a.plus = r.per_class->first;
      a.minus = r.per_class->second;
    }
    atoms.push_back(std::move(a));
    return static_cast<int>(atoms.size()) - 1;
  };
  push_atom(first);
  lambda.push_back(1.0);
  Vector x = first.minimizer;

  NearestPointResult res;
  res.norm_trace.push_back(x.norm());
  int t = 0;
  double gap = std::numeric_limits<double>::infinity();
  double gap_floor = 0.0;  // rounding noise in the gap computation
  int stall = 0;
  for (; t < max_iter; ++t) {
    if (x.norm() <= 1e-15) {  // exactly at the origin
      gap = 0.0;
      break;
    }
    SupportResult s = lmo(x);
    gap = x.squaredNorm() - s.value;  // <x - s, x>
    gap_floor = 64.0 * std::numeric_limits<double>::epsilon() *
                (x.squaredNorm() + std::abs(s.value) + 1.0);
    if (gap <= std::max(gap_tol, gap_floor)) break;
    const double f_enter = x.squaredNorm();

    const int new_idx = push_atom(s);
    if (new_idx >= 0) lambda.push_back(0.0);

    // Wolfe minor cycles over the current atom set.
    bool corrected = false;
    for (int minor = 0; minor < 2 * static_cast<int>(atoms.size()) + 8;
         ++minor) {
      Vector alpha;
      if (!affine_min_norm(atoms, alpha)) break;
      if (alpha.minCoeff() >= -1e-12) {
        // affine solution already in the simplex
        for (std::size_t i = 0; i < atoms.size(); ++i)
          lambda[i] = std::max(alpha[static_cast<int>(i)], 0.0);
        corrected = true;
        break;
      }
      // step toward alpha until the first weight hits zero, drop it
      double theta = 1.0;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (alpha[static_cast<int>(i)] < lambda[i])
          theta = std::min(
              theta, lambda[i] / (lambda[i] - alpha[static_cast<int>(i)]));
      }
      theta = std::clamp(theta, 0.0, 1.0);
      for (std::size_t i = 0; i < atoms.size(); ++i)
        lambda[i] = (1 - theta) * lambda[i] + theta * alpha[static_cast<int>(i)];
      for (std::size_t i = atoms.size(); i-- > 0;) {
        if (lambda[i] <= 1e-14 && atoms.size() > 1) {
          atoms.erase(atoms.begin() + static_cast<long>(i));
          lambda.erase(lambda.begin() + static_cast<long>(i));
        }
      }
    }

    auto combine = [&] {
      Vector xn = Vector::Zero(d);
      double mass = 0;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        xn += lambda[i] * atoms[i].v;
        mass += lambda[i];
      }
      if (mass > 0) {
        xn /= mass;
        for (auto& l : lambda) l /= mass;
      }
      return xn;
    };

    if (corrected) {
      Vector xn = combine();
      if (xn.squaredNorm() <= f_enter + 1e-15) {
        x = std::move(xn);
        // compact the representation so the atom set stays O(d)
        reduce_to_affine_independence(atoms, lambda, d);
        x = combine();
        res.norm_trace.push_back(x.norm());
        if (f_enter - x.squaredNorm() <=
            1e-17 * std::max(1.0, x.squaredNorm())) {
          if (++stall >= 3) { ++t; break; }
        } else {
          stall = 0;
        }
        continue;
      }
      // numerical regression: fall through to the plain FW step
    }

    // Plain Frank-Wolfe step with exact line search on the segment [x, s].
    const Vector dir = s.minimizer - x;
    const double denom = dir.squaredNorm();
    if (denom <= 1e-30) break;  // stalled: s coincides with x
    const double gamma = std::clamp(-x.dot(dir) / denom, 0.0, 1.0);
    if (gamma <= 0) break;
    // rebuild weights for the segment step
    int idx = -1;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if ((atoms[i].v - s.minimizer).lpNorm<Eigen::Infinity>() <= 1e-14)
        idx = static_cast<int>(i);
    for (auto& l : lambda) l *= (1 - gamma);
    if (idx >= 0)
      lambda[static_cast<std::size_t>(idx)] += gamma;
    reduce_to_affine_independence(atoms, lambda, d);
    x = combine();
    res.norm_trace.push_back(x.norm());

    // terminate once the objective stops moving at machine precision
    if (f_enter - x.squaredNorm() <=
        1e-17 * std::max(1.0, x.squaredNorm())) {
      if (++stall >= 3) { ++t; break; }
    } else {
      stall = 0;
    }
  }

  res.x_star = x;
  res.distance = x.norm();
  res.gap = std::max(gap, 0.0);
  res.iterations = t;
  res.converged = res.gap <= std::max(gap_tol, gap_floor);
  if (track_classes) {
    Vector xp = Vector::Zero(d), xm = Vector::Zero(d);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      xp += lambda[i] * atoms[i].plus;
      xm += lambda[i] * atoms[i].minus;
    }
    res.per_class = {std::move(xp), std::move(xm)};
  }
  return res;
}

Regime classify_regime(double g_opt, double tol) {
  if (g_opt > tol) return Regime::StrictlySeparated;
  if (g_opt < -tol) return Regime::Overlapping;
  return Regime::Touching;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::StrictlySeparated: return "strictly_separated";
    case Regime::Touching: return "touching";
    case Regime::Overlapping: return "overlapping";
  }
  return "?";
}

ConvexSolution solve_convex(const PairSet& pair, double tol, int max_iter) {
  NearestPointResult np = nearest_point(pair, tol, max_iter);
  if (np.distance <= tol)
    throw NotSeparated("solve_convex: sets intersect (distance " +
                       std::to_string(np.distance) + ")");
  ConvexSolution sol;
  sol.w_star = np.x_star / np.distance;
  sol.w_star /= sol.w_star.norm();  // renormalize exactly
  sol.value = np.distance;
  sol.per_class = np.per_class;
  return sol;
}

const char* eta_max_status_name(EtaMaxStatus s) {
  switch (s) {
    case EtaMaxStatus::Found: return "found";
    case EtaMaxStatus::NeverIntersects: return "never_intersects";
    case EtaMaxStatus::AlwaysIntersects: return "always_intersects";
    case EtaMaxStatus::NotApplicable: return "n/a";
  }
  return "?";
}

EtaMaxResult eta_max(const PairBuilder& builder, double lo, double hi,
                     const EtaMaxConfig& cfg) {
  if (!(lo < hi)) throw InvalidBracket("eta_max: need lo < hi");
  if (lo < builder.eta_lo() || hi > builder.eta_hi() + 1e-12)
    throw InvalidBracket("eta_max: bracket outside the family range");

  auto solve_at = [&](double eta) {
    return nearest_point(builder.at(eta), cfg.np_tol, cfg.np_max_iter);
  };

  EtaMaxResult res;
  NearestPointResult at_hi = solve_at(hi);
  if (at_hi.distance > cfg.member_tol) {
    res.status = EtaMaxStatus::NeverIntersects;
    res.bracket = {lo, hi};
    res.distance_at_eta_max = at_hi.distance;
    res.witness_x = at_hi.x_star;
    res.witness_per_class = at_hi.per_class;
    res.witness_distance = at_hi.distance;
    return res;
  }
  NearestPointResult at_lo = solve_at(lo);
  if (at_lo.distance <= cfg.member_tol) {
    res.status = EtaMaxStatus::AlwaysIntersects;
    res.bracket = {lo, hi};
    res.distance_at_eta_max = at_lo.distance;
    res.eta_max = lo;
    return res;
  }

  NearestPointResult witness = at_lo;
  while (hi - lo > cfg.tol) {
    const double mid = 0.5 * (lo + hi);
    NearestPointResult at_mid = solve_at(mid);
    if (at_mid.distance <= cfg.member_tol) {
      hi = mid;
    } else {
      lo = mid;
      witness = std::move(at_mid);
    }
  }
  res.status = EtaMaxStatus::Found;
  res.bracket = {lo, hi};
  // report the member side of the bracket, where the distance is certified
  // below member_tol, so a solve at eta_max sits in the touching band
  res.eta_max = hi;
  res.distance_at_eta_max = solve_at(res.eta_max).distance;
  res.witness_x = witness.x_star;
  res.witness_per_class = witness.per_class;
  res.witness_distance = witness.distance;
  return res;
}

EtaMaxResult eta_max_auto(const PairBuilder& builder, const EtaMaxConfig& cfg) {
  if (!builder.parametrized()) {
    EtaMaxResult res;
    res.status = EtaMaxStatus::NotApplicable;
    return res;
  }
  if (builder.family() == Family::ReducedConvexHull)
    return eta_max(builder, 0.0, builder.eta_hi(), cfg);

  // ellipsoidal families: grow the bracket until the sets intersect
  double hi = 1.0;
  const double cap = std::ldexp(1.0, 60);
  while (hi < cap) {
    NearestPointResult np =
        nearest_point(builder.at(hi), cfg.np_tol, cfg.np_max_iter);
    if (np.distance <= cfg.member_tol) break;
    hi *= 2.0;
  }
  if (hi >= cap) {
    EtaMaxResult res;
    res.status = EtaMaxStatus::NeverIntersects;
    res.bracket = {0.0, cap};
    return res;
  }
  return eta_max(builder, 0.0, hi, cfg);
}

std::vector<SweepPoint> eta_sweep(const PairBuilder& builder,
                                  const std::vector<double>& grid,
                                  const SweepConfig& cfg) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] < grid[i - 1])
      throw InvalidParameter("eta_sweep: grid must be ascending");

  const EtaMaxResult em = eta_max_auto(builder, cfg.eta_cfg);
  std::vector<SweepPoint> out;
  out.reserve(grid.size());
  for (double eta : grid) {
    const PairSet pair = builder.at(eta);
    SweepPoint p;
    p.eta = eta;
    const bool below =
        em.status == EtaMaxStatus::NeverIntersects ||
        (em.status == EtaMaxStatus::Found && eta < em.eta_max - cfg.boundary_tol);
    const bool boundary = em.status == EtaMaxStatus::Found &&
                          std::abs(eta - em.eta_max) <= cfg.boundary_tol;
    if (below) {
      NearestPointResult np =
          nearest_point(pair, cfg.eta_cfg.np_tol, cfg.eta_cfg.np_max_iter);
      p.value = np.distance;
      p.regime = Regime::StrictlySeparated;
    } else if (boundary) {
      NearestPointResult np =
          nearest_point(pair, cfg.eta_cfg.np_tol, cfg.eta_cfg.np_max_iter);
      p.value = np.distance;  // the optimal value is 0 at the boundary
      p.regime = Regime::Touching;
    } else {
      LocalSearchConfig ls;
      LocalSearchResult r = local_search(pair, ls);
      p.value = r.value;
      p.regime = classify_regime(r.value, cfg.boundary_tol);
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace rcm
