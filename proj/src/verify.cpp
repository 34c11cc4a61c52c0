#include "rcm/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rcm/instancegen.hpp"
#include "rcm/linalg.hpp"
#include "rcm/model.hpp"
#include "rcm/oracle.hpp"
#include "rcm/solver_convex.hpp"
#include "rcm/solver_nonconvex.hpp"
#include "rcm/statcheck.hpp"

namespace rcm::verify {

namespace {

struct Suite {
  SuiteResult result;
  explicit Suite(std::string name) { result.name = std::move(name); }

  void check(bool ok, const std::string& what) {
    ++result.checks;
    if (!ok) {
      ++result.failures;
      result.messages.push_back(what);
    }
  }

  void check_le(double value, double bound, const std::string& what) {
    std::ostringstream os;
    os << what << " (" << value << " > " << bound << ")";
    check(value <= bound, os.str());
  }
};

// Membership via support duality: x in U iff x . v >= g_U(v) for all v.
bool member_by_support(const UncertaintySet& set, const Vector& x,
                       int directions, double tol) {
  const Eigen::Index d = x.size();
  for (int i = 0; i < directions; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / directions;
    Vector v(d);
    if (d == 2) {
      v << std::cos(theta), std::sin(theta);
    } else {
      gen::Rng rng(static_cast<std::uint64_t>(i) + 1);
      v = gen::random_unit(rng, d);
    }
    if (x.dot(v) < support_min(set, v).value - tol) return false;
  }
  return true;
}

// Brute-force reduced-hull support on a lambda grid (<= 3 points). The grid
// is augmented with the cap breakpoints {cap, 1-cap, 1-2cap} so every vertex
// of the capped simplex is enumerated exactly.
double rch_support_grid(const ReducedConvexHullSet& s, const Vector& w,
                        double step) {
  const int n = static_cast<int>(std::lround(1.0 / step));
  const int k = static_cast<int>(s.points.size());
  const double cap = s.cap();
  std::vector<double> cand;
  for (int i = 0; i <= n; ++i)
    if (double(i) / n <= cap + 1e-12) cand.push_back(double(i) / n);
  for (double v : {cap, 1.0 - cap, 1.0 - 2.0 * cap})
    if (v >= 0.0 && v <= cap + 1e-12) cand.push_back(v);

  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](double l1, double l2, double l3) {
    if (l1 > cap + 1e-12 || l2 > cap + 1e-12 || l3 > cap + 1e-12) return;
    if (l1 < -1e-12 || l2 < -1e-12 || l3 < -1e-12) return;
    Vector x = l1 * s.points[0];
    if (k > 1) x += l2 * s.points[1];
    if (k > 2) x += l3 * s.points[2];
    best = std::min(best, x.dot(w));
  };
  if (k == 1) {
    consider(1, 0, 0);
  } else if (k == 2) {
    for (double l1 : cand) consider(l1, 1.0 - l1, 0);
  } else {
    for (double l1 : cand)
      for (double l2 : cand) consider(l1, l2, 1.0 - l1 - l2);
  }
  return best;
}

}  // namespace

SuiteResult verify_linalg(std::uint64_t seed) {
  Suite s("linalg");
  gen::Rng rng(seed);
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::Index d = 2 + rep % 7;
    Matrix a = gen::random_spd(rng, d, 0.0);
    a -= 0.5 * a.trace() / d * Matrix::Identity(d, d);  // indefinite symmetric
    auto [w, v] = linalg::sym_eig(a);
    s.check_le((v * w.asDiagonal() * v.transpose() - a).cwiseAbs().maxCoeff(),
               1e-10, "sym_eig reconstruction");
    s.check_le((v.transpose() * v - Matrix::Identity(d, d)).cwiseAbs().maxCoeff(),
               1e-10, "sym_eig orthonormality");
    s.check(std::is_sorted(w.begin(), w.end()), "sym_eig ascending order");
  }
  for (int rep = 0; rep < 8; ++rep) {
    const Eigen::Index d = rep < 4 ? 2 + rep : 50;
    const Matrix a = gen::random_spd(rng, d, rep % 2 ? 0.0 : 0.2);
    const Matrix r = linalg::psd_sqrt(a);
    s.check_le((r * r - a).cwiseAbs().maxCoeff(), 1e-8, "psd_sqrt square");
    s.check(linalg::is_symmetric(r), "psd_sqrt symmetric");
  }
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::Index d = 2 + rep % 6;
    const Matrix a = gen::random_spd(rng, d, 0.15);
    const Vector x = gen::random_vector(rng, d, 3.0);
    const Vector b = a * x;
    const Vector xr = linalg::solve_spd(a, b);
    s.check_le((a * xr - b).norm(), 1e-8 * std::max(1.0, b.norm()),
               "solve_spd residual");
  }
  return s.result;
}

SuiteResult verify_uncertainty(std::uint64_t seed) {
  Suite s("uncertainty");
  gen::Rng rng(seed);

  // fractional knapsack vs dense lambda grid
  for (int rep = 0; rep < 12; ++rep) {
    std::uniform_int_distribution<int> npts(1, 3);
    std::uniform_real_distribution<double> unu(0.3, 1.0);
    const int k = npts(rng);
    ReducedConvexHullSet rch{gen::random_points(rng, 2, k, Vector::Zero(2), 2.0),
                             0.0, 2 * k};
    rch.nu = unu(rng) * 2.0 * k / rch.m_total;  // feasible by construction
    const Vector w = gen::random_unit(rng, 2);
    const auto r = support_min(UncertaintySet{rch}, w);
    const double grid = rch_support_grid(rch, w, 0.02);
    s.check_le(std::abs(r.value - grid), 1e-6, "rch knapsack vs lambda grid");
    s.check(r.value <= grid + 1e-9, "rch knapsack is the true minimum");
  }

  // ellipsoid support vs boundary sampling (d = 2)
  for (int rep = 0; rep < 6; ++rep) {
    EllipsoidSet e{gen::random_vector(rng, 2, 2.0),
                   linalg::psd_sqrt(gen::random_spd(rng, 2, 0.1)), 0.7};
    const Vector w = gen::random_unit(rng, 2);
    const auto r = support_min(UncertaintySet{e}, w);
    double sampled = std::numeric_limits<double>::infinity();
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * std::numbers::pi * i / n;
      Vector u(2);
      u << std::cos(t), std::sin(t);
      sampled = std::min(sampled,
                         (e.center + e.radius * (e.sqrt_cov * u)).dot(w));
    }
    s.check_le(std::abs(r.value - sampled), 1e-5, "ellipsoid support vs grid");
    s.check(r.value <= sampled + 1e-12, "closed form below boundary samples");
  }

  // positive homogeneity, concavity, minimizer identities
  std::vector<UncertaintySet> sets;
  sets.push_back(ConvexHullSet{gen::random_points(rng, 2, 4, Vector::Zero(2), 2)});
  sets.push_back(ReducedConvexHullSet{
      gen::random_points(rng, 2, 3, Vector::Ones(2), 2), 0.8, 6});
  sets.push_back(EllipsoidSet{gen::random_vector(rng, 2, 1.5),
                              linalg::psd_sqrt(gen::random_spd(rng, 2, 0.2)),
                              0.9});
  for (const auto& set : sets) {
    for (int rep = 0; rep < 8; ++rep) {
      const Vector w = gen::random_unit(rng, 2);
      std::uniform_real_distribution<double> ua(0.1, 5.0), ut(0.0, 1.0);
      const double alpha = ua(rng);
      const auto r1 = support_min(set, w);
      const auto ra = support_min(set, alpha * w);
      s.check_le(std::abs(ra.value - alpha * r1.value),
                 1e-12 * std::max(1.0, std::abs(alpha * r1.value)),
                 "positive homogeneity");
      s.check_le(std::abs(r1.value - r1.minimizer.dot(w)), 1e-10,
                 "support value equals minimizer projection");
      const Vector w2 = gen::random_unit(rng, 2);
      const double t = ut(rng);
      const double lhs = support_min(set, t * w + (1 - t) * w2).value;
      const double rhs =
          t * r1.value + (1 - t) * support_min(set, w2).value;
      s.check(lhs >= rhs - 1e-10, "concavity of the support function");
      s.check(member_by_support(set, r1.minimizer, 90, 1e-9),
              "minimizer membership (support duality)");
    }
  }

  // ellipsoid pullback membership with nonsingular S
  {
    EllipsoidSet e{Vector::Zero(2),
                   linalg::psd_sqrt(gen::random_spd(rng, 2, 0.3)), 1.3};
    for (int rep = 0; rep < 6; ++rep) {
      const Vector w = gen::random_unit(rng, 2);
      const auto r = support_min(UncertaintySet{e}, w);
      const Vector u = e.sqrt_cov.fullPivLu().solve(r.minimizer - e.center);
      s.check_le(u.norm(), e.radius + 1e-8, "ellipsoid pullback norm");
    }
  }

  // inclusion monotonicity of the families in normalized eta
  for (Family fam : {Family::ReducedConvexHull, Family::Ellipsoid, Family::Fda}) {
    const PairBuilder b = gen::random_builder(rng, fam, 2, 2.0);
    std::uniform_real_distribution<double> ue(0.0, fam == Family::ReducedConvexHull
                                                       ? b.eta_hi()
                                                       : 1.5);
    double e1 = ue(rng), e2 = ue(rng);
    if (e1 > e2) std::swap(e1, e2);
    const PairSet p1 = b.at(e1), p2 = b.at(e2);
    bool mono = true;
    for (int i = 0; i < 360; ++i) {
      const double t = 2.0 * std::numbers::pi * i / 360;
      Vector w(2);
      w << std::cos(t), std::sin(t);
      if (support_min_pair(p1, w).value < support_min_pair(p2, w).value - 1e-10)
        mono = false;
    }
    s.check(mono, "inclusion monotonicity for " + family_name(fam));
  }

  // feasibility boundary of the reduced hull
  s.check(rch_feasible(1.0, 3, 6), "nu_max boundary feasible");
  s.check(!rch_feasible(1.01, 3, 6), "beyond nu_max infeasible");
  s.check(rch_feasible(1e-9, 3, 6), "tiny nu always feasible");
  return s.result;
}

SuiteResult verify_solver_convex(std::uint64_t seed) {
  Suite s("solver_convex");
  gen::Rng rng(seed);

  for (int rep = 0; rep < 10; ++rep) {
    const Family fam = static_cast<Family>(rep % 4);
    const PairBuilder b = gen::random_builder(rng, fam, 2, 4.0);
    const PairSet pair = b.at(fam == Family::ConvexHull ? 0.0 : 0.05);
    const NearestPointResult np = nearest_point(pair, 1e-8, 100000);
    for (std::size_t i = 1; i < np.norm_trace.size(); ++i)
      s.check(np.norm_trace[i] <= np.norm_trace[i - 1] + 1e-12,
              "monotone descent of ||x_k||");
    if (np.distance > 1e-6) {
      const ConvexSolution sol = solve_convex(pair, 1e-8);
      s.check_le(std::abs(sol.w_star.norm() - 1.0), 1e-10, "unit norm w*");
      s.check_le(std::abs(sol.value - np.distance), 1e-7, "value = distance");
      const double g = support_min_pair(pair, sol.w_star).value;
      s.check_le(std::abs(g - np.distance), 1e-7,
                 "duality g(w*) = nearest distance");
    }
  }

  // classify_regime scaling invariance
  std::uniform_real_distribution<double> uscale(1e-6, 1e6);
  for (int rep = 0; rep < 12; ++rep) {
    const double g = gen::random_vector(rng, 1, 2.0)[0];
    const double tol = 1e-3;
    const double c = uscale(rng);
    s.check(classify_regime(g, tol) == classify_regime(c * g, c * tol),
            "classify_regime scaling invariance");
  }

  // sweep monotone on the canonical symmetric-ellipsoid instance
  {
    ClassMoments p = moments_from((Vector(2) << 1, 0).finished(),
                                  Matrix::Identity(2, 2));
    ClassMoments m = moments_from((Vector(2) << -1, 0).finished(),
                                  Matrix::Identity(2, 2));
    const PairBuilder b = PairBuilder::ellipsoid(p, m);
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(0.2 * i);
    const auto sweep = eta_sweep(b, grid);
    for (std::size_t i = 1; i < sweep.size(); ++i)
      s.check(sweep[i].value <= sweep[i - 1].value + 1e-6,
              "eta_sweep non-increasing");
    s.check_le(std::abs(sweep[0].value - 2.0), 1e-6, "sweep value at eta 0");
    s.check_le(std::abs(sweep[5].value - 0.0), 1e-4, "sweep value at eta_max");
    s.check(sweep[10].value < -1e-3, "sweep negative above eta_max");
  }
  return s.result;
}

SuiteResult verify_solver_nonconvex(std::uint64_t seed) {
  Suite s("solver_nonconvex");
  gen::Rng rng(seed);

  int terminated = 0, total = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const Family fam = static_cast<Family>(rep % 4);
    PairBuilder b = gen::random_builder(rng, fam, 2, 1.0);
    double eta;
    if (fam == Family::ConvexHull) {
      // overlapping hulls: re-sample until the hulls intersect
      int guard = 0;
      while (nearest_point(b.at(0.0), 1e-8, 20000).distance > 1e-9 &&
             guard++ < 50)
        b = gen::random_builder(rng, fam, 2, 0.2);
      if (guard >= 50) continue;
      eta = 0.0;
    } else {
      const EtaMaxResult em = eta_max_auto(b);
      if (em.status != EtaMaxStatus::Found) continue;
      std::uniform_real_distribution<double> ub(1.3, 2.5);
      eta = em.eta_max * ub(rng);
      if (fam == Family::ReducedConvexHull)
        eta = std::min(eta, 0.5 * (em.eta_max + b.eta_hi()));
    }
    const PairSet pair = b.at(eta);
    LocalSearchConfig cfg;
    cfg.seed = seed + rep;
    const LocalSearchResult r = local_search(pair, cfg);
    ++total;
    if (r.converged) ++terminated;

    const auto& rec = r.trace.records;
    for (std::size_t t = 0; t < rec.size(); ++t) {
      s.check(rec[t].w_hat.norm() >= 1.0 - 1e-12, "norm expansion of w_hat");
      s.check_le(std::abs(rec[t].w_tilde.norm() - 1.0), 1e-12,
                 "unit norm of recorded iterates");
      s.check(rec[t].g_tilde < 0, "negativity of g along the search");
      if (t + 1 < rec.size())
        s.check(rec[t + 1].g_tilde > rec[t].g_tilde - 1e-12,
                "strict improvement across outer iterations");
    }
    s.check(r.value < 0, "negative optimal value in the overlapping regime");
  }
  s.check(total >= 15, "enough overlapping instances generated");
  s.check(terminated == total, "finite termination on every instance");
  return s.result;
}

SuiteResult verify_model(std::uint64_t seed) {
  Suite s("model");
  gen::Rng rng(seed);

  std::uniform_real_distribution<double> ur(0.01, 0.99);
  for (int rep = 0; rep < 10; ++rep) {
    const double eta = ur(rng);
    s.check_le(std::abs(alpha_from_kappa(kappa_from_rate(eta)) + eta - 1.0),
               1e-12, "rate/kappa/alpha round trip");
  }

  for (int rep = 0; rep < 8; ++rep) {
    const Family fam = static_cast<Family>(rep % 4);
    const double sep = rep < 4 ? 4.0 : 0.5;  // both regimes
    const Dataset data = gen::blob_dataset(rng, 2, 6, 6, sep, 1.0);
    TrainConfig cfg;
    cfg.search.seed = seed + rep;
    TrainedModel model;
    try {
      model = train(data, fam, ParamSpec::automatic(), cfg);
    } catch (const InvalidParameter&) {
      continue;  // auto parameter undefined for separable-at-all-eta data
    }
    s.check_le(std::abs(model.w.norm() - 1.0), 1e-10, "trained w unit norm");
    s.check(model.regime == classify_regime(model.g_value, cfg.boundary_tol),
            "regime consistent with the sign of g");
    const Metrics mid = evaluate(model, data);
    TrainedModel thr = model;
    thr.b = bias_best_threshold(data, model.w);
    const Metrics scan = evaluate(thr, data);
    s.check(scan.error_rate <= mid.error_rate + 1e-12,
            "threshold bias no worse than midpoint on training data");

    // prediction invariance under joint positive rescaling
    TrainedModel scaled = model;
    scaled.w *= 7.5;
    scaled.b *= 7.5;
    bool same = true;
    for (int i = 0; i < data.size(); ++i)
      if (predict(model, data.x(i)) != predict(scaled, data.x(i))) same = false;
    s.check(same, "predict invariant to positive rescaling");
  }
  return s.result;
}

SuiteResult verify_statcheck(std::uint64_t seed) {
  Suite s("statcheck");
  gen::Rng rng(seed);
  const LossSpec logistic = logistic_loss();

  // logistic curvature on a z-grid
  {
    bool ok = true;
    for (int i = 0; i <= 100; ++i) {
      const double z = -50.0 + i;
      const double h = 1e-4;
      const double d2 = (logistic.eval(z + h) - 2 * logistic.eval(z) +
                         logistic.eval(z - h)) /
                        (h * h);
      if (d2 < -1e-6 || d2 > 0.25 + 1e-6) ok = false;
    }
    s.check(ok, "logistic curvature within [0, 1/4]");
  }

  ClassPriors priors;
  for (int rep = 0; rep < 10; ++rep) {
    std::uniform_real_distribution<double> unorm(1.2, 3.0);
    const Vector cp = unorm(rng) * gen::random_unit(rng, 2);
    const Vector cm = unorm(rng) * gen::random_unit(rng, 2);
    const auto fp = gen::random_discrete_family(rng, 2, cp);
    const auto fm = gen::random_discrete_family(rng, 2, cm);
    const auto rep_check = sandwich_check(fp, fm, priors, logistic, 1e-9);
    s.check(rep_check.worst >= rep_check.j_star - 1e-9,
            "Jensen lower bound");
    s.check(rep_check.worst <= rep_check.upper + 1e-9, "Taylor upper bound");
    s.check(rep_check.holds, "sandwich holds");
  }

  // point-mass collapse: worst case equals max over pairs of min_bias_j
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<DiscreteDistribution> fp, fm;
    std::uniform_int_distribution<int> nmem(1, 3);
    for (int i = 0, n = nmem(rng); i < n; ++i)
      fp.push_back({{gen::random_vector(rng, 2, 2.0) + 2 * Vector::Ones(2)},
                    {1.0}});
    for (int i = 0, n = nmem(rng); i < n; ++i)
      fm.push_back({{gen::random_vector(rng, 2, 2.0) - 2 * Vector::Ones(2)},
                    {1.0}});
    const Vector w = gen::random_unit(rng, 2);
    const double worst =
        worst_case_expected_loss(fp, fm, w, priors, logistic, 1e-9);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : fp)
      for (const auto& m : fm)
        best = std::max(best, min_bias_j(w, p.support[0], m.support[0], priors,
                                         logistic, {}, 1e-9)
                                  .value);
    s.check_le(std::abs(worst - best), 1e-6, "point-mass collapse");
  }

  // mean_set closed under explicit mixtures
  {
    std::vector<DiscreteDistribution> fam;
    for (int i = 0; i < 3; ++i)
      fam.push_back({{gen::random_vector(rng, 2, 2.0)}, {1.0}});
    const UncertaintySet hull = mean_set(fam);
    std::vector<DiscreteDistribution> closed = fam;
    // add pairwise mixtures as explicit members
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        DiscreteDistribution mix;
        mix.support = {fam[i].support[0], fam[j].support[0]};
        mix.weights = {0.3, 0.7};
        closed.push_back(std::move(mix));
      }
    const UncertaintySet hull2 = mean_set(closed);
    bool same = true;
    for (int i = 0; i < 360; ++i) {
      const double t = 2.0 * std::numbers::pi * i / 360;
      Vector w(2);
      w << std::cos(t), std::sin(t);
      if (std::abs(support_min(hull, w).value - support_min(hull2, w).value) >
          1e-12)
        same = false;
    }
    s.check(same, "mean_set unchanged under mixture closure");
  }
  return s.result;
}

SuiteResult verify_oracle(std::uint64_t seed) {
  Suite s("oracle");
  gen::Rng rng(seed);

  // grid solver vs the main solvers with the Lipschitz slack
  for (int rep = 0; rep < 6; ++rep) {
    const Family fam = static_cast<Family>(rep % 4);
    const PairBuilder b = gen::random_builder(rng, fam, 2, 4.0);
    const PairSet pair = b.at(fam == Family::ConvexHull ? 0.0 : 0.1);
    const NearestPointResult np = nearest_point(pair, 1e-8, 100000);
    if (np.distance <= 1e-6) continue;
    const auto grid = oracle::grid_sphere_solve(pair, 3600);
    // diameter bound from support extremes along the axes
    double diam = 0;
    for (int k = 0; k < 2; ++k) {
      const Vector e = Vector::Unit(2, k);
      diam = std::max(diam, -support_min_pair(pair, e).value -
                                support_min_pair(pair, -e).value);
    }
    const double slack = diam * (2 * std::numbers::pi / 3600);
    s.check(grid.value <= np.distance + 1e-7, "grid value below optimum");
    s.check(np.distance <= grid.value + slack + 1e-7,
            "grid value within Lipschitz slack of optimum");
  }

  // closed-form discriminant direction maximizes the mean/variance ratio
  for (int rep = 0; rep < 4; ++rep) {
    const ClassMoments p = gen::random_moments(rng, 2, 2.0);
    const ClassMoments m = gen::random_moments(rng, 2, 2.0);
    if ((p.mean - m.mean).norm() < 0.3) continue;
    const auto [w, zeta] = oracle::fda_closed_form(p, m);
    const Matrix sum_sqrt = linalg::psd_sqrt(p.cov + m.cov);
    auto ratio = [&](const Vector& v) {
      return (p.mean - m.mean).dot(v) / (sum_sqrt * v).norm();
    };
    const double best = ratio(w);
    bool dominated = false;
    for (int i = 0; i < 1000; ++i)
      if (ratio(gen::random_unit(rng, 2)) > best + 1e-9) dominated = true;
    s.check(!dominated, "closed-form direction maximizes the ratio");
    s.check_le(std::abs(zeta - best), 1e-9, "zeta_max equals the best ratio");
  }

  // kappa closed form vs bisection on the ellipsoid family
  for (int rep = 0; rep < 20; ++rep) {
    const PairBuilder b = gen::random_builder(rng, Family::Ellipsoid, 2, 2.5);
    const EtaMaxResult em = eta_max_auto(b);
    if (em.status != EtaMaxStatus::Found) continue;
    const PairSet pair = b.at(1.0);
    const auto& plus = std::get<EllipsoidSet>(std::get<ClassPair>(pair).plus);
    const auto& minus = std::get<EllipsoidSet>(std::get<ClassPair>(pair).minus);
    const double kappa = oracle::mpm_kappa_closed_form(
        moments_from(plus.center, plus.sqrt_cov * plus.sqrt_cov),
        moments_from(minus.center, minus.sqrt_cov * minus.sqrt_cov));
    s.check_le(std::abs(kappa - em.eta_max), 1e-3,
               "kappa closed form agrees with bisection");
  }
  return s.result;
}

std::vector<SuiteResult> run_all_suites(std::uint64_t seed) {
  return {verify_linalg(seed),          verify_uncertainty(seed),
          verify_solver_convex(seed),   verify_solver_nonconvex(seed),
          verify_model(seed),           verify_statcheck(seed),
          verify_oracle(seed)};
}

}  // namespace rcm::verify
