#include <doctest.h>

#include <cmath>

#include "rcm/instancegen.hpp"
#include "rcm/oracle.hpp"
#include "rcm/solver_convex.hpp"
#include "rcm/solver_nonconvex.hpp"
#include "rcm/verify.hpp"

using namespace rcm;

namespace {
Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }
Vector v1(double a) { return (Vector(1) << a).finished(); }

// U = ball of radius 1 around (0.5, 0); the origin is interior
PairSet ball_instance() {
  return DirectDiff{EllipsoidSet{v2(0.5, 0), Matrix::Identity(2, 2), 1.0}};
}
}  // namespace

TEST_CASE("linearized subproblem: one-variable calculus instance") {
  const Vector w_hat = linearized_subproblem(ball_instance(), v2(0, 1));
  CHECK(w_hat[1] == doctest::Approx(1.0).epsilon(1e-12));  // stays on the plane
  CHECK(w_hat[0] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-9));
}

TEST_CASE("linearized subproblem: fixed point at the optimum") {
  const Vector w_hat = linearized_subproblem(ball_instance(), v2(1, 0));
  CHECK((w_hat - v2(1, 0)).norm() <= 1e-9);
}

TEST_CASE("linearized subproblem in 1-D returns the single feasible point") {
  const PairSet u = DirectDiff{ConvexHullSet{{v1(-2), v1(6)}}};
  const Vector w_hat = linearized_subproblem(u, v1(1));
  CHECK(w_hat[0] == doctest::Approx(1.0));
}

TEST_CASE("linearized subproblem rejects non-unit directions") {
  CHECK_THROWS_AS(linearized_subproblem(ball_instance(), v2(1, 1)),
                  InvalidDirection);
}

TEST_CASE("linearized subproblem flags a non-interior origin") {
  // sets are strictly separated, g > 0 in the gap direction: the relaxation
  // escapes upward
  const PairSet sep = DirectDiff{EllipsoidSet{v2(3, 0), Matrix::Identity(2, 2), 1.0}};
  CHECK_THROWS_AS(linearized_subproblem(sep, v2(0, 1)), SubproblemUnbounded);
}

TEST_CASE("local_search on the ball instance from a cold start") {
  LocalSearchConfig cfg;
  cfg.start = LocalSearchConfig::Start::Given;
  cfg.start_direction = v2(0, 1);
  const auto r = local_search(ball_instance(), cfg);
  CHECK(r.converged);
  CHECK(r.w_star[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.value == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("local_search terminates immediately at a fixed point") {
  LocalSearchConfig cfg;
  cfg.start = LocalSearchConfig::Start::Given;
  cfg.start_direction = v2(1, 0);
  const auto r = local_search(ball_instance(), cfg);
  CHECK(r.converged);
  CHECK(r.trace.records.size() == 1);
  CHECK(r.trace.records[0].step_norm <= cfg.epsilon);
  CHECK(r.value == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("local_search on the 1-D overlapping hull pair") {
  const PairSet pair = ClassPair{ConvexHullSet{{v1(-1), v1(3)}},
                                 ConvexHullSet{{v1(-3), v1(1)}}};
  LocalSearchConfig cfg;  // mean-difference start picks w = +1
  const auto r = local_search(pair, cfg);
  CHECK(r.converged);
  CHECK(r.w_star[0] == doctest::Approx(1.0));
  CHECK(r.value == doctest::Approx(-2.0));
}

TEST_CASE("hessian_g closed form") {
  const PairSet u = DirectDiff{EllipsoidSet{v2(0, 0), Matrix::Identity(2, 2), 1.0}};
  const Matrix h = hessian_g(u, v2(1, 0));
  CHECK(h(0, 0) == doctest::Approx(0.0));
  CHECK(h(1, 1) == doctest::Approx(-1.0));
  CHECK(std::abs(h(0, 1)) <= 1e-14);

  const PairSet z = DirectDiff{EllipsoidSet{v2(0, 0), Matrix::Identity(2, 2), 0.0}};
  CHECK(hessian_g(z, v2(1, 0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hessian_g matches central finite differences") {
  gen::Rng rng(17);
  for (int rep = 0; rep < 5; ++rep) {
    const PairBuilder b = gen::random_builder(rng, Family::Ellipsoid, 2, 1.0);
    const PairSet pair = b.at(0.8);
    const Vector w = gen::random_unit(rng, 2);
    const Matrix h = hessian_g(pair, w);
    const double step = 1e-5;
    Matrix fd(2, 2);
    auto g = [&](const Vector& x) { return support_min_pair(pair, x).value; };
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const Vector ei = step * Vector::Unit(2, i), ej = step * Vector::Unit(2, j);
        fd(i, j) = (g(w + ei + ej) - g(w + ei - ej) - g(w - ei + ej) +
                    g(w - ei - ej)) /
                   (4 * step * step);
      }
    }
    CHECK((h - fd).cwiseAbs().maxCoeff() <= 1e-4);
  }
}

TEST_CASE("hessian_g rejects hull families and vanishing seminorms") {
  const PairSet hulls = ClassPair{ConvexHullSet{{v2(1, 0)}},
                                  ConvexHullSet{{v2(-1, 0)}}};
  CHECK_THROWS_AS(hessian_g(hulls, v2(1, 0)), NotDifferentiable);

  Matrix rank1 = Matrix::Zero(2, 2);
  rank1(0, 0) = 1.0;
  const PairSet degenerate = DirectDiff{EllipsoidSet{v2(0, 0), rank1, 1.0}};
  CHECK_THROWS_AS(hessian_g(degenerate, v2(0, 1)), NotDifferentiable);
}

TEST_CASE("local_optimality_check at and off the optimum") {
  const auto at_opt =
      local_optimality_check(ball_instance(), v2(1, 0), 0.05, 1000, 42);
  CHECK(at_opt.max_violation <= 1e-8);
  REQUIRE(at_opt.hessian_test.has_value());
  CHECK(*at_opt.hessian_test);  // max eig -1 < g = -0.5
  CHECK(at_opt.hessian_max_eig == doctest::Approx(-1.0).epsilon(1e-9));

  const auto off_opt =
      local_optimality_check(ball_instance(), v2(0, 1), 0.05, 1000, 42);
  CHECK(off_opt.max_violation > 0);
}

TEST_CASE("solver_nonconvex invariant suite") {
  const auto r = verify::verify_solver_nonconvex(0);
  for (const auto& m : r.messages) MESSAGE(m);
  CHECK(r.failures == 0);
}

TEST_CASE("local_search in 3-D agrees with the Fibonacci-sphere oracle") {
  gen::Rng rng(31);
  int matched = 0, total = 0;
  for (int rep = 0; rep < 6; ++rep) {
    const PairBuilder b = gen::random_builder(rng, Family::Ellipsoid, 3, 1.0);
    const auto em = eta_max_auto(b);
    if (em.status != EtaMaxStatus::Found) continue;
    const PairSet pair = b.at(em.eta_max * 1.5);
    LocalSearchConfig cfg;
    cfg.seed = rep;
    const auto r = local_search(pair, cfg);
    REQUIRE(r.converged);
    CHECK(r.value < 0);
    for (std::size_t t = 0; t + 1 < r.trace.records.size(); ++t)
      CHECK(r.trace.records[t + 1].g_tilde >
            r.trace.records[t].g_tilde - 1e-12);
    const auto grid = oracle::grid_sphere_solve(pair, 20000);
    ++total;
    // 20000-point sphere grid resolves directions to ~1.6 degrees
    if (std::abs(r.value - grid.value) <= 5e-2) ++matched;
    else CHECK(local_optimality_check(pair, r.w_star, 0.05, 2000, 7)
                   .max_violation <= 1e-8);
  }
  CHECK(total >= 4);
  CHECK(matched >= total - 1);  // rare legitimate non-global optima allowed
}

TEST_CASE("nearest_point in 3-D against the sphere-grid oracle") {
  gen::Rng rng(37);
  for (int rep = 0; rep < 4; ++rep) {
    const Family fam = rep % 2 ? Family::ConvexHull : Family::Ellipsoid;
    const PairBuilder b = gen::random_builder(rng, fam, 3, 4.0);
    const PairSet pair = b.at(fam == Family::ConvexHull ? 0.0 : 0.2);
    const auto np = nearest_point(pair, 1e-8, 100000);
    if (np.distance <= 1e-6) continue;
    const auto grid = oracle::grid_sphere_solve(pair, 20000);
    CHECK(grid.value <= np.distance + 1e-9);
    CHECK(np.distance - grid.value <= 0.05 * np.distance + 1e-6);
  }
}

TEST_CASE("hessian_g in 3-D matches finite differences") {
  gen::Rng rng(41);
  const PairBuilder b = gen::random_builder(rng, Family::Ellipsoid, 3, 1.0);
  const PairSet pair = b.at(0.9);
  const Vector w = gen::random_unit(rng, 3);
  const Matrix h = hessian_g(pair, w);
  const double step = 1e-5;
  auto g = [&](const Vector& x) { return support_min_pair(pair, x).value; };
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Vector ei = step * Vector::Unit(3, i), ej = step * Vector::Unit(3, j);
      const double fd = (g(w + ei + ej) - g(w + ei - ej) - g(w - ei + ej) +
                         g(w - ei - ej)) /
                        (4 * step * step);
      CHECK(h(i, j) == doctest::Approx(fd).epsilon(1e-3).scale(1.0));
    }
  }
}
