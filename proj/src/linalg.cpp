#include "rcm/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace rcm::linalg {

bool is_symmetric(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

static void require_symmetric(const Matrix& a, const char* who) {
  if (!is_symmetric(a))
    throw InvalidMatrix(std::string(who) + ": matrix is not symmetric");
  if (!a.allFinite())
    throw InvalidMatrix(std::string(who) + ": matrix has non-finite entries");
}

std::pair<Vector, Matrix> sym_eig(const Matrix& a) {
  require_symmetric(a, "sym_eig");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success)
    throw InvalidMatrix("sym_eig: eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

Matrix psd_sqrt(const Matrix& a) {
  auto [w, v] = sym_eig(a);
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] < -kPsdClamp * scale)
      throw NotPSD("psd_sqrt: eigenvalue " + std::to_string(w[i]) +
                   " below PSD tolerance");
    w[i] = std::sqrt(std::max(w[i], 0.0));
  }
  Matrix s = v * w.asDiagonal() * v.transpose();
  return 0.5 * (s + s.transpose());  // kill rounding asymmetry
}

Vector solve_spd(const Matrix& a, const Vector& b) {
  require_symmetric(a, "solve_spd");
  if (a.rows() != b.size())
    throw DimensionError("solve_spd: size mismatch");
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success)
    throw NotSPD("solve_spd: matrix is not positive definite");
  // LLT succeeds on some barely-indefinite inputs; enforce the spectral floor.
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= kSpdFloor)
    throw NotSPD("solve_spd: minimum eigenvalue below SPD floor");
  return llt.solve(b);
}

}  // namespace rcm::linalg
