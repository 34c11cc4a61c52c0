#include "rcm/statcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcm/solver_convex.hpp"
#include "rcm/solver_nonconvex.hpp"

namespace rcm {

LossSpec exponential_loss() {
  LossSpec l;
  l.name = "exponential";
  l.eval = [](double z) { return std::exp(-z); };
  l.monotone_nonincreasing = true;
  return l;
}

LossSpec logistic_loss() {
  LossSpec l;
  l.name = "logistic";
  l.eval = [](double z) {
    // ln(1 + e^{-z}) without overflow
    return z >= 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
  };
  l.curvature_bound = 0.25;
  l.monotone_nonincreasing = true;
  return l;
}

void validate_curvature(const LossSpec& loss, double z_lo, double z_hi,
                        int grid) {
  if (!loss.curvature_bound)
    throw InvalidLoss("loss '" + loss.name + "' carries no curvature bound");
  if (!loss.monotone_nonincreasing)
    throw InvalidLoss("loss '" + loss.name + "' is not non-increasing");
  const double L = *loss.curvature_bound;
  const double h = 1e-4;
  for (int i = 0; i < grid; ++i) {
    const double z = z_lo + (z_hi - z_lo) * i / (grid - 1);
    const double f0 = loss.eval(z - h), f1 = loss.eval(z), f2 = loss.eval(z + h);
    const double d1 = (f2 - f0) / (2 * h);
    const double d2 = (f2 - 2 * f1 + f0) / (h * h);
    if (d1 > 1e-8)
      throw InvalidLoss("loss '" + loss.name + "' increases at z = " +
                        std::to_string(z));
    if (d2 < -1e-6 || d2 > L + 1e-6)
      throw InvalidLoss("loss '" + loss.name + "' violates 0 <= l'' <= L at z = " +
                        std::to_string(z));
  }
}

Vector DiscreteDistribution::mean() const {
  Vector m = Vector::Zero(support.front().size());
  for (std::size_t i = 0; i < support.size(); ++i) m += weights[i] * support[i];
  return m;
}

void DiscreteDistribution::validate() const {
  if (support.empty() || support.size() != weights.size())
    throw InvalidParameter("DiscreteDistribution: malformed support/weights");
  double sum = 0;
  for (double w : weights) {
    if (w < 0) throw InvalidParameter("DiscreteDistribution: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw InvalidParameter("DiscreteDistribution: weights sum to " +
                           std::to_string(sum));
}

double j_loss(const Vector& w, double b, const Vector& x_plus,
              const Vector& x_minus, const ClassPriors& priors,
              const LossSpec& loss) {
  return priors.pi_plus * loss.eval(x_plus.dot(w) + b) +
         priors.pi_minus * loss.eval(-x_minus.dot(w) - b);
}

namespace {

// Golden-section minimum of a unimodal function; returns the best point seen.
BiasMin golden_section(const std::function<double(double)>& f, double lo,
                       double hi, double tol) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  if (!std::isfinite(f1) || !std::isfinite(f2))
    throw LossOverflow("non-finite loss value during bias minimization");
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
    if (!std::isfinite(f1) || !std::isfinite(f2))
      throw LossOverflow("non-finite loss value during bias minimization");
  }
  BiasMin r;
  r.b = 0.5 * (a + b);
  r.value = f(r.b);
  return r;
}

}  // namespace

BiasMin min_bias_j(const Vector& w, const Vector& x_plus,
                   const Vector& x_minus, const ClassPriors& priors,
                   const LossSpec& loss,
                   std::optional<std::pair<double, double>> bracket,
                   double tol) {
  double lo, hi;
  if (bracket) {
    lo = bracket->first;
    hi = bracket->second;
  } else {
    const double scale =
        10.0 * std::max(std::abs(x_plus.dot(w)), std::abs(x_minus.dot(w))) +
        10.0;
    lo = -scale;
    hi = scale;
  }
  return golden_section(
      [&](double b) { return j_loss(w, b, x_plus, x_minus, priors, loss); },
      lo, hi, tol);
}

UncertaintySet mean_set(const std::vector<DiscreteDistribution>& family) {
  if (family.empty()) throw EmptyFamily("mean_set: empty family");
  std::vector<Vector> means;
  means.reserve(family.size());
  for (const auto& p : family) {
    p.validate();
    means.push_back(p.mean());
  }
  return ConvexHullSet{std::move(means)};
}

namespace {

// All weight vectors on the k-simplex with entries i/steps.
void simplex_grid(int k, int steps, std::vector<std::vector<double>>& out) {
  std::vector<int> counts(k, 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == k - 1) {
      counts[pos] = left;
      std::vector<double> w(k);
      for (int i = 0; i < k; ++i) w[i] = static_cast<double>(counts[i]) / steps;
      out.push_back(std::move(w));
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[pos] = c;
      rec(pos + 1, left - c);
    }
  };
  rec(0, steps);
}

struct FlatClass {
  std::vector<double> proj;                 // support projections, flattened
  std::vector<std::vector<double>> pw;      // per-distribution point weights
  std::vector<std::vector<int>> pidx;       // per-distribution indices
};

FlatClass flatten(const std::vector<DiscreteDistribution>& fam,
                  const Vector& w) {
  FlatClass f;
  for (const auto& p : fam) {
    p.validate();
    std::vector<int> idx;
    std::vector<double> pw;
    for (std::size_t j = 0; j < p.support.size(); ++j) {
      idx.push_back(static_cast<int>(f.proj.size()));
      f.proj.push_back(p.support[j].dot(w));
      pw.push_back(p.weights[j]);
    }
    f.pidx.push_back(std::move(idx));
    f.pw.push_back(std::move(pw));
  }
  return f;
}

}  // namespace

double worst_case_expected_loss(
    const std::vector<DiscreteDistribution>& p_plus,
    const std::vector<DiscreteDistribution>& p_minus, const Vector& w,
    const ClassPriors& priors, const LossSpec& loss, double tol,
    double mixture_step) {
  if (p_plus.empty() || p_minus.empty())
    throw EmptyFamily("worst_case_expected_loss: empty family");
  const FlatClass fp = flatten(p_plus, w);
  const FlatClass fm = flatten(p_minus, w);

  double scale = 10.0;
  for (double z : fp.proj) scale = std::max(scale, std::abs(z));
  for (double z : fm.proj) scale = std::max(scale, std::abs(z));
  const double bracket = 10.0 * scale + 10.0;

  const int kp = static_cast<int>(p_plus.size());
  const int km = static_cast<int>(p_minus.size());
  const int steps = std::max(1, static_cast<int>(std::lround(1.0 / mixture_step)));

  std::vector<std::vector<double>> mix_p, mix_m;
  simplex_grid(kp, steps, mix_p);
  simplex_grid(km, steps, mix_m);
  // vertex pairs are already grid points; add them explicitly anyway in case
  // of a coarse step that misses corners
  for (int i = 0; i < kp; ++i) {
    std::vector<double> v(kp, 0.0);
    v[i] = 1.0;
    mix_p.push_back(std::move(v));
  }
  for (int i = 0; i < km; ++i) {
    std::vector<double> v(km, 0.0);
    v[i] = 1.0;
    mix_m.push_back(std::move(v));
  }

  // mixture expected loss at bias b: linear in the mixture weights
  auto expected = [&](const FlatClass& f, const std::vector<double>& theta,
                      double b, double sign) {
    double e = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      if (theta[i] == 0.0) continue;
      double ei = 0.0;
      for (std::size_t j = 0; j < f.pidx[i].size(); ++j)
        ei += f.pw[i][j] * loss.eval(sign * (f.proj[f.pidx[i][j]] + b));
      e += theta[i] * ei;
    }
    return e;
  };

  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& tp : mix_p) {
    for (const auto& tm : mix_m) {
      auto objective = [&](double b) {
        // pi+ E[l(z + b)] + pi- E[l(-(z + b))] with z the projections
        return priors.pi_plus * expected(fp, tp, b, +1.0) +
               priors.pi_minus * expected(fm, tm, b, -1.0);
      };
      const BiasMin bm = golden_section(objective, -bracket, bracket, tol);
      worst = std::max(worst, bm.value);
    }
  }
  return worst;
}

namespace {

// RCM direction over a hull pair: convex path when separated, local search
// otherwise.
Vector rcm_direction(const UncertaintySet& up, const UncertaintySet& um) {
  const PairSet pair = ClassPair{up, um};
  NearestPointResult np = nearest_point(pair, 1e-8, 100000);
  if (np.distance > 1e-7) return np.x_star / np.distance;
  LocalSearchConfig cfg;
  return local_search(pair, cfg).w_star;
}

}  // namespace

SandwichReport sandwich_check(const std::vector<DiscreteDistribution>& p_plus,
                              const std::vector<DiscreteDistribution>& p_minus,
                              const ClassPriors& priors, const LossSpec& loss,
                              double tol, double mixture_step) {
  validate_curvature(loss);
  SandwichReport rep;

  const UncertaintySet up = mean_set(p_plus);
  const UncertaintySet um = mean_set(p_minus);
  rep.w = rcm_direction(up, um);

  const auto& means_p = std::get<ConvexHullSet>(up).points;
  const auto& means_m = std::get<ConvexHullSet>(um).points;

  rep.c = 0.0;
  for (const auto& m : means_p) rep.c = std::max(rep.c, m.norm());
  for (const auto& m : means_m) rep.c = std::max(rep.c, m.norm());

  // inner max over mean pairs: min_b J is non-increasing in the projected
  // separation, so vertex enumeration is exact
  rep.j_star = -std::numeric_limits<double>::infinity();
  for (const auto& mp : means_p)
    for (const auto& mm : means_m)
      rep.j_star = std::max(
          rep.j_star, min_bias_j(rep.w, mp, mm, priors, loss, {}, tol).value);

  rep.worst = worst_case_expected_loss(p_plus, p_minus, rep.w, priors, loss,
                                       tol, mixture_step);
  const double L = *loss.curvature_bound;
  rep.upper = rep.j_star + L * rep.c * rep.c / 2.0;
  rep.holds = rep.j_star - 1e-9 - tol <= rep.worst &&
              rep.worst <= rep.upper + 1e-9 + tol;
  return rep;
}

}  // namespace rcm
