#pragma once

#include <vector>

#include "lsm/model.hpp"

namespace lsm {

enum class SolverMethod {
  /// Primal-dual path following on the XZ central path. Default.
  kInteriorPoint,
  /// ADMM alternating the unit-diagonal affine projection with the PSD
  /// cone projection.
  kOperatorSplitting,
};

struct SolverConfig {
  SolverMethod method = SolverMethod::kInteriorPoint;
  int max_iters = 5000;
  /// Stop once max(primal, dual) residual (entrywise max-norm) drops below this.
  double feas_tol = 1e-6;
  /// Entrywise tolerance for declaring the solution exactly rank one.
  double round_tol = 1e-3;
  /// ADMM only: initial penalty, doubled or halved every rho_interval
  /// iterations when one residual exceeds the other by more than rho_balance.
  double rho = 1.0;
  double rho_balance = 10.0;
  int rho_interval = 50;
  /// Interior point only: centering parameter for the target mu.
  double centering = 0.2;
  bool record_history = false;

  void validate() const;
};

/// Result of solving max tr(W Y) s.t. diag(Y) = 1, Y PSD.
struct SdpSolution {
  Matrix Y;  // PSD with unit diagonal
  double objective = 0.0;
  Labels rounded_labels;
  bool converged = false;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double rho = 0.0;  // ADMM only
  /// max |Y - r rᵀ| < round_tol for the rounded labels r.
  bool exact = false;
  /// Per-iteration tr(W Y_k) of the unit-diagonal iterate (ADMM) or the
  /// primal iterate (interior point); only when record_history.
  std::vector<double> objective_history;
};

/// W = 2A - 11ᵀ + I. Throws InvalidInput for a malformed adjacency.
Matrix objective_matrix(const Matrix& adjacency);

/// Solves max tr(W Y) s.t. diag(Y) = 1, Y PSD with W = objective_matrix(A).
/// The returned Y is the final PSD iterate rescaled to an exactly unit
/// diagonal. Hitting max_iters is not an error; it yields converged = false.
SdpSolution solve(const Matrix& adjacency, const SolverConfig& config = {});

/// Signs of the leading eigenvector of Y, zeros mapped to +1, with the global
/// sign fixed so that entry 0 is +1. For Y = I the eigenvector is whichever
/// the LAPACK routine returns for the largest eigenvalue (deterministic for a
/// fixed build).
Labels round_labels(const Matrix& Y);

/// max_ij |Y_ij - y*_i y*_j| < tol.
bool success_test(const Matrix& Y, const Labels& y_star, double tol = 1e-3);

/// max_ij |Y_ij - y_i y_j|.
double max_deviation(const Matrix& Y, const Labels& y);

}  // namespace lsm
