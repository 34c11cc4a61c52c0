#pragma once

#include <Eigen/Core>
#include <utility>

#include "rcm/errors.hpp"

namespace rcm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace linalg {

/// Relative symmetry tolerance accepted by the symmetric routines.
inline constexpr double kSymmetryTol = 1e-12;

/// Eigenvalues below -kPsdClamp fail psd_sqrt; tiny negatives are clamped to 0.
inline constexpr double kPsdClamp = 1e-10;

/// Minimum eigenvalue for a matrix to count as positive definite in solve_spd.
inline constexpr double kSpdFloor = 1e-12;

bool is_symmetric(const Matrix& a, double rel_tol = kSymmetryTol);

/// Symmetric eigendecomposition A = V diag(w) V^T, eigenvalues ascending.
/// Throws InvalidMatrix if A is not symmetric within kSymmetryTol.
std::pair<Vector, Matrix> sym_eig(const Matrix& a);

/// Symmetric PSD square root via eigendecomposition. Eigenvalues in
/// [-kPsdClamp, 0) are clamped to 0; anything below throws NotPSD.
Matrix psd_sqrt(const Matrix& a);

/// Solve A x = b for symmetric positive definite A. Throws NotSPD when the
/// smallest eigenvalue is <= kSpdFloor.
Vector solve_spd(const Matrix& a, const Vector& b);

}  // namespace linalg
}  // namespace rcm
