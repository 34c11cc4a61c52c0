#include <doctest.h>

#include <cmath>

#include "rcm/instancegen.hpp"
#include "rcm/statcheck.hpp"
#include "rcm/verify.hpp"

using namespace rcm;

namespace {
Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }

LossSpec constant_loss(double c) {
  LossSpec l;
  l.name = "constant";
  l.eval = [c](double) { return c; };
  l.curvature_bound = 0.0;
  return l;
}
}  // namespace

TEST_CASE("j_loss hand evaluation with the exponential loss") {
  const ClassPriors p;
  const LossSpec exp_loss = exponential_loss();
  const double j0 =
      j_loss(v2(1, 0), 0.0, v2(1, 0), v2(-1, 0), p, exp_loss);
  CHECK(j0 == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  const double j1 =
      j_loss(v2(1, 0), 1.0, v2(1, 0), v2(-1, 0), p, exp_loss);
  CHECK(j1 == doctest::Approx(0.5 * (std::exp(-2.0) + 1.0)).epsilon(1e-12));

  CHECK(j_loss(v2(1, 0), -3.7, v2(2, 2), v2(0, 1), p, constant_loss(4.25)) ==
        doctest::Approx(4.25));
}

TEST_CASE("min_bias_j symmetric instance centers the bias") {
  const ClassPriors p;
  const auto r =
      min_bias_j(v2(1, 0), v2(1, 0), v2(-1, 0), p, exponential_loss());
  CHECK(r.b == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(r.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("min_bias_j agrees with a dense bias grid") {
  const ClassPriors p;
  gen::Rng rng(9);
  for (int rep = 0; rep < 5; ++rep) {
    const Vector w = gen::random_unit(rng, 2);
    const Vector xp = gen::random_vector(rng, 2, 2.0);
    const Vector xm = rep == 0 ? xp : gen::random_vector(rng, 2, 2.0);
    const auto r = min_bias_j(w, xp, xm, p, logistic_loss());
    double dense = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 40000; ++i) {
      const double b = -40.0 + 80.0 * i / 40000.0;
      dense = std::min(dense, j_loss(w, b, xp, xm, p, logistic_loss()));
    }
    CHECK(r.value <= dense + 1e-6);
    CHECK(r.value >= dense - 1e-6);
  }
}

TEST_CASE("min_bias_j is flat for a constant loss") {
  const auto r = min_bias_j(v2(1, 0), v2(1, 1), v2(0, 0), {}, constant_loss(2.5));
  CHECK(r.value == doctest::Approx(2.5));
}

TEST_CASE("mean_set builds the hull of member means") {
  DiscreteDistribution point{{v2(1, 2)}, {1.0}};
  const auto single = mean_set({point});
  CHECK(support_min(single, v2(1, 0)).value == doctest::Approx(1.0));

  DiscreteDistribution spread;  // mean (2,0)
  spread.support = {v2(1, 0), v2(3, 0)};
  spread.weights = {0.5, 0.5};
  DiscreteDistribution origin{{v2(0, 0)}, {1.0}};
  const auto segment = mean_set({origin, spread});
  CHECK(support_min(segment, v2(1, 0)).value == doctest::Approx(0.0));
  CHECK(support_min(segment, v2(-1, 0)).value == doctest::Approx(-2.0));

  CHECK_THROWS_AS(mean_set({}), EmptyFamily);
}

TEST_CASE("worst_case_expected_loss on point masses") {
  const ClassPriors p;
  const std::vector<DiscreteDistribution> fp{{{v2(1, 0)}, {1.0}}};
  const std::vector<DiscreteDistribution> fm{{{v2(-1, 0)}, {1.0}}};
  const double worst =
      worst_case_expected_loss(fp, fm, v2(1, 0), p, exponential_loss());
  CHECK(worst == doctest::Approx(std::exp(-1.0)).epsilon(1e-7));
}

TEST_CASE("worst case picks the mean nearer the boundary") {
  const ClassPriors p;
  const std::vector<DiscreteDistribution> fp{{{v2(1, 0)}, {1.0}},
                                             {{v2(3, 0)}, {1.0}}};
  const std::vector<DiscreteDistribution> fm{{{v2(-1, 0)}, {1.0}}};
  const double worst =
      worst_case_expected_loss(fp, fm, v2(1, 0), p, exponential_loss());
  const auto nearer =
      min_bias_j(v2(1, 0), v2(1, 0), v2(-1, 0), p, exponential_loss());
  CHECK(worst == doctest::Approx(nearer.value).epsilon(1e-7));

  CHECK(worst_case_expected_loss(fp, fm, v2(1, 0), p, constant_loss(3.0)) ==
        doctest::Approx(3.0));
}

TEST_CASE("sandwich_check on point masses: zero Taylor remainder") {
  const ClassPriors p;
  const std::vector<DiscreteDistribution> fp{{{v2(2, 0)}, {1.0}}};
  const std::vector<DiscreteDistribution> fm{{{v2(-1, 1)}, {1.0}}};
  const auto rep = sandwich_check(fp, fm, p, logistic_loss());
  CHECK(rep.holds);
  CHECK(rep.worst == doctest::Approx(rep.j_star).epsilon(1e-6));
}

TEST_CASE("spread with identical means moves the worst case up") {
  const ClassPriors p;
  DiscreteDistribution tight{{v2(2, 0)}, {1.0}};
  DiscreteDistribution wide;
  wide.support = {v2(1.2, 0), v2(2.8, 0)};
  wide.weights = {0.5, 0.5};
  const std::vector<DiscreteDistribution> fp{tight, wide};
  const std::vector<DiscreteDistribution> fm{{{v2(-2, 0)}, {1.0}}};
  const auto rep = sandwich_check(fp, fm, p, logistic_loss());
  CHECK(rep.worst >= rep.j_star - 1e-9);  // Jensen direction
  CHECK(rep.holds);
}

TEST_CASE("validate_curvature rejects losses without a usable bound") {
  CHECK_THROWS_AS(validate_curvature(exponential_loss()), InvalidLoss);
  CHECK_NOTHROW(validate_curvature(logistic_loss()));
  LossSpec bad = logistic_loss();
  bad.curvature_bound = 0.01;  // too small for the logistic curvature
  CHECK_THROWS_AS(validate_curvature(bad), InvalidLoss);
}

TEST_CASE("statcheck invariant suite") {
  const auto r = verify::verify_statcheck(0);
  for (const auto& m : r.messages) MESSAGE(m);
  CHECK(r.failures == 0);
}

TEST_CASE("overflowing loss values surface as LossOverflow") {
  LossSpec blowup;
  blowup.name = "blowup";
  blowup.eval = [](double z) { return std::exp(-z * 1e6); };
  CHECK_THROWS_AS(
      min_bias_j(v2(1, 0), v2(500, 0), v2(-500, 0), {}, blowup),
      LossOverflow);
}
