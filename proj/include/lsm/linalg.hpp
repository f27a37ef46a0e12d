#pragma once

#include "lsm/model.hpp"

// Dense symmetric eigen-primitives backed by LAPACK. All routines read only
// the lower triangle and return eigenvalues in ascending order.
namespace lsm::linalg {

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // column k pairs with values[k]
};

SymmetricEigen eigh(const Matrix& a);
Vector eigvalsh(const Matrix& a);

/// Nearest positive semidefinite matrix in Frobenius norm: keeps the
/// eigenpairs with positive eigenvalue. Only those are computed.
Matrix project_psd(const Matrix& a);

/// Eigenvector for the largest eigenvalue, unit norm.
Vector leading_eigenvector(const Matrix& a);

/// max |lambda| of a symmetric matrix.
double spectral_norm(const Matrix& a);

}  // namespace lsm::linalg
