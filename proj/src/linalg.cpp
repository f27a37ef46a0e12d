#include "lsm/linalg.hpp"

#include <lapacke.h>

#include <vector>

#include "lsm/error.hpp"

namespace lsm::linalg {
namespace {

void require_square(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("eigensolver input is not square");
}

void check_info(lapack_int info, const char* routine) {
  if (info != 0)
    throw NumericalError(std::string(routine) + " failed with info=" + std::to_string(info));
}

}  // namespace

SymmetricEigen eigh(const Matrix& a) {
  require_square(a);
  const auto n = static_cast<lapack_int>(a.rows());
  SymmetricEigen out{Vector(n), a};
  if (n == 0) return out;
  check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(), n, out.values.data()),
             "dsyevd");
  return out;
}

Vector eigvalsh(const Matrix& a) {
  require_square(a);
  const auto n = static_cast<lapack_int>(a.rows());
  Matrix work = a;
  Vector w(n);
  if (n == 0) return w;
  check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, w.data()), "dsyevd");
  return w;
}

Matrix project_psd(const Matrix& a) {
  require_square(a);
  const auto n = static_cast<lapack_int>(a.rows());
  if (n == 0) return a;
  Matrix work = a;
  // Every eigenvalue lies in [-||a||_F, ||a||_F]; (0, upper] selects the
  // strictly positive part.
  const double upper = a.norm() + 1.0;
  Vector w(n);
  Matrix z(n, n);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  check_info(LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'V', 'L', n, work.data(), n, 0.0, upper, 0, 0,
                            0.0, &found, w.data(), z.data(), n, support.data()),
             "dsyevr");
  if (found == 0) return Matrix::Zero(n, n);
  Matrix scaled = z.leftCols(found);
  for (lapack_int k = 0; k < found; ++k) scaled.col(k) *= std::sqrt(w[k]);
  Matrix out = Matrix::Zero(n, n);
  out.selfadjointView<Eigen::Lower>().rankUpdate(scaled);
  out.triangularView<Eigen::StrictlyUpper>() = out.transpose();
  return out;
}

Vector leading_eigenvector(const Matrix& a) {
  require_square(a);
  const auto n = static_cast<lapack_int>(a.rows());
  if (n == 0) return Vector();
  Matrix work = a;
  Vector w(n);
  Matrix z(n, 1);
  std::vector<lapack_int> support(2);
  lapack_int found = 0;
  check_info(LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, work.data(), n, 0.0, 0.0, n, n, 0.0,
                            &found, w.data(), z.data(), n, support.data()),
             "dsyevr");
  if (found != 1) throw NumericalError("dsyevr did not return the leading eigenpair");
  return z.col(0);
}

double spectral_norm(const Matrix& a) {
  const Vector w = eigvalsh(a);
  if (w.size() == 0) return 0.0;
  return std::max(std::abs(w[0]), std::abs(w[w.size() - 1]));
}

}  // namespace lsm::linalg
