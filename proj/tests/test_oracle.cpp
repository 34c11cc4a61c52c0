#include <doctest.h>

#include <cmath>

#include "rcm/instancegen.hpp"
#include "rcm/oracle.hpp"
#include "rcm/verify.hpp"

using namespace rcm;

namespace {
Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }
Vector v1(double a) { return (Vector(1) << a).finished(); }
}  // namespace

TEST_CASE("grid_sphere_solve on singletons, a ball, and a 1-D pair") {
  const PairSet singles =
      ClassPair{ConvexHullSet{{v2(1, 0)}}, ConvexHullSet{{v2(-1, 0)}}};
  const auto r0 = oracle::grid_sphere_solve(singles, 10000);
  CHECK(r0.value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r0.w_best[0] == doctest::Approx(1.0).epsilon(1e-3));

  const PairSet ball =
      DirectDiff{EllipsoidSet{v2(0.5, 0), Matrix::Identity(2, 2), 1.0}};
  const auto r1 = oracle::grid_sphere_solve(ball, 10000);
  CHECK(r1.value == doctest::Approx(-0.5).epsilon(1e-6));

  const PairSet oned = ClassPair{ConvexHullSet{{v1(-1), v1(3)}},
                                 ConvexHullSet{{v1(-3), v1(1)}}};
  const auto r2 = oracle::grid_sphere_solve(oned, 10000);
  CHECK(r2.w_best[0] == doctest::Approx(1.0));
  CHECK(r2.value == doctest::Approx(-2.0));
}

TEST_CASE("grid_sphere_solve covers d = 3 and rejects d > 3") {
  const PairSet cube = ClassPair{
      ConvexHullSet{{(Vector(3) << 1, 0, 0).finished(),
                     (Vector(3) << 2, 1, 1).finished()}},
      ConvexHullSet{{(Vector(3) << -1, 0, 0).finished()}}};
  const auto r = oracle::grid_sphere_solve(cube, 20000);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-3));

  const PairSet big = ClassPair{ConvexHullSet{{Vector::Zero(4)}},
                                ConvexHullSet{{Vector::Ones(4)}}};
  CHECK_THROWS_AS(oracle::grid_sphere_solve(big, 100), DimensionTooLarge);
}

TEST_CASE("grid_nearest_point on the hull instance") {
  const PairSet a = ClassPair{ConvexHullSet{{v2(1, 0), v2(2, 1)}},
                              ConvexHullSet{{v2(-1, 0), v2(-2, 1)}}};
  const auto r = oracle::grid_nearest_point(a, 0.02);
  CHECK(r.distance == doctest::Approx(2.0).epsilon(1e-9));

  const PairSet same = ClassPair{ConvexHullSet{{v2(1, 1), v2(2, 2)}},
                                 ConvexHullSet{{v2(1, 1), v2(2, 2)}}};
  CHECK(oracle::grid_nearest_point(same, 0.02).distance <= 1e-12);

  const PairSet rch = ClassPair{
      ReducedConvexHullSet{{v1(3), v1(-1)}, 0.8, 4},
      ReducedConvexHullSet{{v1(-3), v1(1)}, 0.8, 4}};
  CHECK(oracle::grid_nearest_point(rch, 0.02).distance ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("grid_nearest_point rejects large hulls") {
  const PairSet big = ClassPair{
      ConvexHullSet{{v2(0, 0), v2(1, 0), v2(0, 1), v2(1, 1)}},
      ConvexHullSet{{v2(5, 5)}}};
  CHECK_THROWS_AS(oracle::grid_nearest_point(big, 0.02), TooLarge);
  const PairSet a = ClassPair{ConvexHullSet{{v2(1, 0)}},
                              ConvexHullSet{{v2(-1, 0)}}};
  CHECK_THROWS_AS(oracle::grid_nearest_point(a, 0.05), InvalidParameter);
}

TEST_CASE("fda_closed_form anchors") {
  const auto [w, zeta] =
      oracle::fda_closed_form(moments_from(v2(1, 0), Matrix::Identity(2, 2) / 2),
                              moments_from(v2(-1, 0), Matrix::Identity(2, 2) / 2));
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(zeta == doctest::Approx(2.0).epsilon(1e-12));

  const auto [w0, zeta0] =
      oracle::fda_closed_form(moments_from(v2(1, 1), Matrix::Identity(2, 2)),
                              moments_from(v2(1, 1), Matrix::Identity(2, 2)));
  CHECK(zeta0 == 0.0);

  Matrix d14 = Matrix::Zero(2, 2);
  d14(0, 0) = 1;
  d14(1, 1) = 4;
  const auto [w2, zeta2] = oracle::fda_closed_form(
      moments_from(v2(1, 0), d14), moments_from(v2(-1, 0), d14));
  CHECK(w2[0] == doctest::Approx(1.0));
  CHECK(zeta2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("mpm_kappa_closed_form anchors") {
  const auto i2 = Matrix::Identity(2, 2);
  CHECK(oracle::mpm_kappa_closed_form(moments_from(v2(1, 0), i2),
                                      moments_from(v2(-1, 0), i2)) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(oracle::mpm_kappa_closed_form(moments_from(v2(1, 0), i2 / 4),
                                      moments_from(v2(-1, 0), i2 / 4)) ==
        doctest::Approx(2.0).epsilon(1e-6));
  for (double t : {0.5, 2.0, 3.5}) {
    CHECK(oracle::mpm_kappa_closed_form(moments_from(v2(t, 0), i2),
                                        moments_from(v2(-t, 0), i2)) ==
          doctest::Approx(t).epsilon(1e-6));
  }
  CHECK_THROWS_AS(oracle::mpm_kappa_closed_form(moments_from(v2(1, 1), i2),
                                                moments_from(v2(1, 1), i2)),
                  DegenerateMeans);
}

TEST_CASE("oracle invariant suite") {
  const auto r = verify::verify_oracle(0);
  for (const auto& m : r.messages) MESSAGE(m);
  CHECK(r.failures == 0);
}
