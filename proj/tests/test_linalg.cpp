#include <doctest.h>

#include "rcm/instancegen.hpp"
#include "rcm/linalg.hpp"
#include "rcm/verify.hpp"

using namespace rcm;

namespace {
Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}
}  // namespace

TEST_CASE("sym_eig on identity and diagonal matrices") {
  auto [w, v] = linalg::sym_eig(Matrix::Identity(2, 2));
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(1.0));

  auto [wd, vd] = linalg::sym_eig(mat2(4, 0, 0, 9));
  CHECK(wd[0] == doctest::Approx(4.0));
  CHECK(wd[1] == doctest::Approx(9.0));
  // axis-aligned eigenvectors
  CHECK(std::abs(vd.col(0)[0]) == doctest::Approx(1.0));
  CHECK(std::abs(vd.col(1)[1]) == doctest::Approx(1.0));
}

TEST_CASE("sym_eig reconstructs random symmetric matrices") {
  gen::Rng rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    const Eigen::Index d = 3 + rep;
    Matrix a = gen::random_spd(rng, d, 0.0);
    a -= (a.trace() / d) * Matrix::Identity(d, d);
    auto [w, v] = linalg::sym_eig(a);
    CHECK((v * w.asDiagonal() * v.transpose() - a).cwiseAbs().maxCoeff() <=
          1e-10);
    CHECK((v.transpose() * v - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <=
          1e-10);
  }
}

TEST_CASE("sym_eig rejects non-symmetric input") {
  CHECK_THROWS_AS(linalg::sym_eig(mat2(1, 2, 3, 4)), InvalidMatrix);
}

TEST_CASE("psd_sqrt identity and diagonal cases") {
  CHECK((linalg::psd_sqrt(Matrix::Identity(2, 2)) - Matrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
  const Matrix s = linalg::psd_sqrt(mat2(4, 0, 0, 9));
  CHECK(s(0, 0) == doctest::Approx(2.0));
  CHECK(s(1, 1) == doctest::Approx(3.0));
  CHECK(std::abs(s(0, 1)) <= 1e-12);
}

TEST_CASE("psd_sqrt squares back to random PSD input") {
  gen::Rng rng(11);
  for (int rep = 0; rep < 5; ++rep) {
    const Eigen::Index d = 2 + 3 * rep;
    std::normal_distribution<double> gauss;
    Matrix b = Matrix::NullaryExpr(
        d, d, [&](Eigen::Index, Eigen::Index) { return gauss(rng); });
    const Matrix a = b.transpose() * b;  // PSD, possibly near-singular
    const Matrix s = linalg::psd_sqrt(a);
    CHECK((s * s - a).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, a.norm()));
  }
}

TEST_CASE("psd_sqrt rejects indefinite input") {
  CHECK_THROWS_AS(linalg::psd_sqrt(mat2(-1, 0, 0, 1)), NotPSD);
}

TEST_CASE("solve_spd identity, diagonal, and recovery") {
  const Vector b = (Vector(2) << 3, 4).finished();
  CHECK((linalg::solve_spd(Matrix::Identity(2, 2), b) - b).norm() <= 1e-12);

  const Vector x =
      linalg::solve_spd(mat2(2, 0, 0, 4), (Vector(2) << 2, 4).finished());
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));

  gen::Rng rng(3);
  for (int rep = 0; rep < 5; ++rep) {
    const Eigen::Index d = 2 + rep;
    const Matrix a = gen::random_spd(rng, d, 0.2);
    const Vector x0 = gen::random_vector(rng, d, 2.0);
    const Vector xr = linalg::solve_spd(a, a * x0);
    CHECK((xr - x0).norm() <= 1e-8 * std::max(1.0, x0.norm()));
  }
}

TEST_CASE("solve_spd rejects singular and indefinite input") {
  CHECK_THROWS_AS(
      linalg::solve_spd(mat2(1, 0, 0, 0), (Vector(2) << 1, 1).finished()),
      NotSPD);
  CHECK_THROWS_AS(
      linalg::solve_spd(mat2(1, 0, 0, -1), (Vector(2) << 1, 1).finished()),
      NotSPD);
}

TEST_CASE("linalg invariant suite") {
  const auto r = verify::verify_linalg(0);
  for (const auto& m : r.messages) MESSAGE(m);
  CHECK(r.failures == 0);
}
