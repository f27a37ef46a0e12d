#include "lsm/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lsm/error.hpp"
#include "lsm/linalg.hpp"

namespace lsm {
namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double trace_product(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b).sum(); }

// D^{-1/2} Z D^{-1/2}; keeps Z PSD and makes the diagonal exactly one.
Matrix unit_diagonal(const Matrix& z) {
  const Vector scale = z.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  Matrix y = scale.asDiagonal() * z * scale.asDiagonal();
  y = 0.5 * (y + y.transpose()).eval();
  y.diagonal().setOnes();
  return y;
}

// Largest step t with base + t * dir still positive semidefinite, given a
// positive definite base. Infinity when dir is PSD itself.
double max_psd_step(const Eigen::LLT<Matrix>& base, const Matrix& dir) {
  const auto lower = base.matrixL();
  Matrix m = lower.solve(dir);
  m = lower.solve(Matrix(m.transpose()));
  const Matrix sym = 0.5 * (m + m.transpose());
  const double lmin = linalg::eigvalsh(sym)[0];
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

struct Iterate {
  Matrix y;
  bool converged = false;
  int iterations = 0;
  double primal = 0.0;
  double dual = 0.0;
  double rho = 0.0;
};

// Primal:  max <W, X>   s.t. diag(X) = 1, X PSD
// Dual:    min 1ᵀv      s.t. Z = Diag(v) - W PSD
// Newton step on Z X = mu I with the dual kept feasible; the diagonal
// constraint reduces the system to (Z^{-1} ∘ X) dv = mu diag(Z^{-1}) - 1.
Iterate interior_point(const Matrix& w, const SolverConfig& config,
                       std::vector<double>* history) {
  const Eigen::Index n = w.rows();
  const Vector ones = Vector::Ones(n);
  Matrix x = Matrix::Identity(n, n);
  // Strict diagonal dominance makes the starting slack positive definite.
  Vector v = w.cwiseAbs().rowwise().sum() + ones;
  Matrix z = Matrix(v.asDiagonal()) - w;

  Iterate out;
  for (int it = 0;; ++it) {
    const double gap = trace_product(x, z);
    out.primal = (x.diagonal() - ones).cwiseAbs().maxCoeff();
    out.dual = gap / static_cast<double>(n);
    out.iterations = it;
    if (history) history->push_back(trace_product(w, x));
    if (out.primal < config.feas_tol && out.dual < config.feas_tol) {
      out.converged = true;
      break;
    }
    if (it == config.max_iters) break;

    Eigen::LLT<Matrix> z_llt(z);
    Eigen::LLT<Matrix> x_llt(x);
    // Loss of definiteness this late only happens once the iterates are at
    // the limit of double precision; return what we have.
    if (z_llt.info() != Eigen::Success || x_llt.info() != Eigen::Success) break;

    const double mu = config.centering * out.dual;
    const Matrix z_inv = z_llt.solve(Matrix::Identity(n, n));
    const Matrix schur = z_inv.cwiseProduct(x);
    Eigen::LLT<Matrix> schur_llt(0.5 * (schur + schur.transpose()));
    if (schur_llt.info() != Eigen::Success) break;
    const Vector dv = schur_llt.solve(mu * z_inv.diagonal() - ones);

    Matrix dx = mu * z_inv - x - z_inv * dv.asDiagonal() * x;
    dx = 0.5 * (dx + dx.transpose()).eval();
    const Matrix dz = dv.asDiagonal();

    const double step_x = std::min(1.0, 0.95 * max_psd_step(x_llt, dx));
    const double step_z = std::min(1.0, 0.95 * max_psd_step(z_llt, dz));
    x += step_x * dx;
    v += step_z * dv;
    z = Matrix(v.asDiagonal()) - w;
  }
  out.y = std::move(x);
  return out;
}

// Scaled ADMM on  min -<W, Y>  s.t. diag(Y) = 1, Z PSD, Y = Z.
Iterate operator_splitting(const Matrix& w, const SolverConfig& config,
                           std::vector<double>* history) {
  const Eigen::Index n = w.rows();
  double rho = config.rho;
  Matrix z = Matrix::Identity(n, n);
  Matrix u = Matrix::Zero(n, n);
  Matrix y(n, n);

  Iterate out;
  while (out.iterations < config.max_iters) {
    ++out.iterations;
    y = z - u + w / rho;
    y.diagonal().setOnes();
    if (history) history->push_back(trace_product(w, y));

    Matrix z_next = linalg::project_psd(y + u);
    u += y - z_next;
    out.primal = max_abs(y - z_next);
    out.dual = rho * max_abs(z_next - z);
    z = std::move(z_next);

    if (out.primal < config.feas_tol && out.dual < config.feas_tol) {
      out.converged = true;
      break;
    }
    if (out.iterations % config.rho_interval == 0) {
      if (out.primal > config.rho_balance * out.dual) {
        rho *= 2.0;
        u /= 2.0;
      } else if (out.dual > config.rho_balance * out.primal) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }
  out.rho = rho;
  out.y = std::move(z);
  return out;
}

}  // namespace

void SolverConfig::validate() const {
  if (max_iters < 1) throw InvalidParameter("max_iters must be >= 1");
  if (!(feas_tol > 0.0)) throw InvalidParameter("feas_tol must be positive");
  if (!(round_tol > 0.0)) throw InvalidParameter("round_tol must be positive");
  if (!(rho > 0.0)) throw InvalidParameter("rho must be positive");
  if (!(rho_balance > 1.0)) throw InvalidParameter("rho_balance must exceed 1");
  if (rho_interval < 1) throw InvalidParameter("rho_interval must be >= 1");
  if (!(centering > 0.0 && centering < 1.0)) throw InvalidParameter("centering must lie in (0, 1)");
}

Matrix objective_matrix(const Matrix& adjacency) {
  validate_adjacency(adjacency);
  const Eigen::Index n = adjacency.rows();
  Matrix w = 2.0 * adjacency - Matrix::Ones(n, n);
  w.diagonal().array() += 1.0;
  return w;
}

SdpSolution solve(const Matrix& adjacency, const SolverConfig& config) {
  config.validate();
  const Matrix w = objective_matrix(adjacency);
  if (w.rows() < 2) throw InvalidInput("SDP needs at least two nodes");

  SdpSolution sol;
  std::vector<double>* history = config.record_history ? &sol.objective_history : nullptr;
  Iterate it = config.method == SolverMethod::kInteriorPoint
                   ? interior_point(w, config, history)
                   : operator_splitting(w, config, history);

  sol.converged = it.converged;
  sol.iterations = it.iterations;
  sol.primal_residual = it.primal;
  sol.dual_residual = it.dual;
  sol.rho = it.rho;
  sol.Y = unit_diagonal(it.y);
  sol.objective = trace_product(w, sol.Y);
  sol.rounded_labels = round_labels(sol.Y);
  sol.exact = max_deviation(sol.Y, sol.rounded_labels) < config.round_tol;
  return sol;
}

Labels round_labels(const Matrix& Y) {
  if (Y.rows() != Y.cols()) throw InvalidInput("Y is not square");
  const Vector lead = linalg::leading_eigenvector(Y);
  std::vector<int> out(static_cast<std::size_t>(lead.size()));
  for (Eigen::Index i = 0; i < lead.size(); ++i)
    out[static_cast<std::size_t>(i)] = lead[i] < 0.0 ? -1 : 1;
  return Labels(std::move(out)).sign_normalized();
}

double max_deviation(const Matrix& Y, const Labels& y) {
  if (Y.rows() != static_cast<Eigen::Index>(y.size()) || Y.cols() != Y.rows())
    throw InvalidInput("Y and label vector sizes differ");
  return max_abs(Y - y.outer());
}

bool success_test(const Matrix& Y, const Labels& y_star, double tol) {
  return max_deviation(Y, y_star) < tol;
}

}  // namespace lsm
