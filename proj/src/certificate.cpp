#include "lsm/certificate.hpp"

#include <cmath>

#include "lsm/error.hpp"
#include "lsm/linalg.hpp"

namespace lsm {
namespace {

void require_matching(const Matrix& adjacency, const Labels& y_star) {
  if (adjacency.rows() != static_cast<Eigen::Index>(y_star.size()))
    throw InvalidInput("adjacency has " + std::to_string(adjacency.rows()) + " nodes but " +
                       std::to_string(y_star.size()) + " labels were given");
}

}  // namespace

Vector degree_vector(const Matrix& adjacency, const Labels& y_star) {
  require_matching(adjacency, y_star);
  const Vector y = y_star.to_vector();
  return y.cwiseProduct(adjacency * y);
}

Matrix certificate_matrix(const Matrix& adjacency, const Labels& y_star) {
  const Eigen::Index n = adjacency.rows();
  Matrix s = Matrix::Ones(n, n) - 2.0 * adjacency;
  s.diagonal() += 2.0 * degree_vector(adjacency, y_star);
  return s;
}

double default_eig_tol(Eigen::Index n) { return 1e-8 * static_cast<double>(n); }

CertificateReport certify(const Matrix& adjacency, const Labels& y_star, double eig_tol) {
  validate_adjacency(adjacency);
  require_matching(adjacency, y_star);
  if (!y_star.is_balanced()) throw InvalidInput("ground-truth labels are not balanced");
  const Eigen::Index n = adjacency.rows();
  if (n < 2) throw InvalidInput("certificate needs at least two nodes");

  CertificateReport rep;
  rep.eig_tol = eig_tol > 0.0 ? eig_tol : default_eig_tol(n);
  rep.degrees = degree_vector(adjacency, y_star);
  const Matrix s = certificate_matrix(adjacency, y_star);

  const Vector eig = linalg::eigvalsh(s);
  rep.lambda_min = eig[0];
  rep.lambda_2 = eig[1];
  rep.psd = rep.lambda_min >= -rep.eig_tol;
  rep.unique = rep.psd && rep.lambda_2 > rep.eig_tol;

  const Vector y = y_star.to_vector();
  const double sum = y.sum();
  rep.primal_value = 2.0 * y.dot(adjacency * y) - sum * sum + static_cast<double>(n);
  rep.dual_value = (2.0 * rep.degrees.array() + 1.0).sum();
  rep.gap_identity_ok =
      std::abs(rep.primal_value - rep.dual_value) <= 1e-9 * (1.0 + std::abs(rep.dual_value));
  rep.null_residual = (s * y).cwiseAbs().maxCoeff();
  return rep;
}

bool ConcentrationMargins::all_positive() const {
  for (double m : margins)
    if (!(m > 0.0)) return false;
  return true;
}

std::optional<ConcentrationMargins> concentration_margins(const Matrix& adjacency,
                                                          const Matrix& latents,
                                                          const Kernel& kernel,
                                                          const Labels& y_star,
                                                          const Moments& moments) {
  if (latents.rows() == 0) return std::nullopt;
  validate_adjacency(adjacency);
  require_matching(adjacency, y_star);
  if (latents.rows() != adjacency.rows())
    throw InvalidInput("latent matrix row count differs from node count");
  const Eigen::Index n = adjacency.rows();
  const double p = moments.p, q = moments.q;

  ConcentrationMargins out;
  out.base = static_cast<double>(n) * p * (1.0 - q) / 8.0;

  const Matrix cond_a = edge_probabilities(latents, kernel);
  const Vector y = y_star.to_vector();
  const Vector degrees = degree_vector(adjacency, y_star);
  const Vector cond_degrees = y.cwiseProduct(cond_a * y);

  out.margins[0] = out.base + (degrees - cond_degrees).minCoeff();
  const Vector dev_eig = linalg::eigvalsh(adjacency - cond_a);
  out.margins[1] = out.base - dev_eig[dev_eig.size() - 1];
  const Vector exp_deg = expected_degrees(n, p, q);
  out.margins[2] = out.base - (cond_degrees - exp_deg).cwiseAbs().maxCoeff();
  out.margins[3] = out.base - linalg::spectral_norm(cond_a - expected_adjacency(y_star, p, q));
  return out;
}

Matrix expected_adjacency(const Labels& y_star, double p, double q) {
  const auto n = static_cast<Eigen::Index>(y_star.size());
  Matrix e = Matrix::Constant(n, n, 0.5 * p * (1.0 + q));
  e += 0.5 * p * (1.0 - q) * y_star.outer();
  e.diagonal().array() -= p;
  return e;
}

Vector expected_degrees(Eigen::Index n, double p, double q) {
  return Vector::Constant(n, 0.5 * static_cast<double>(n) * p * (1.0 - q) - p);
}

ExpectedSpectrum expected_matrix_lambda2(int n, double p, double q) {
  if (n < 2 || n % 2 != 0) throw InvalidParameter("n must be a positive even integer");
  std::vector<int> half(static_cast<std::size_t>(n), 1);
  std::fill(half.begin() + n / 2, half.end(), -1);
  const Labels y(half);

  ExpectedSpectrum out;
  out.analytic = static_cast<double>(n) * p * (1.0 - q);
  out.precondition_ok = p * (1.0 + q) <= 1.0;

  Matrix s = Matrix::Ones(n, n) - 2.0 * expected_adjacency(y, p, q);
  s.diagonal() += 2.0 * expected_degrees(n, p, q);
  out.numeric = linalg::eigvalsh(s)[1];
  out.agrees = std::abs(out.analytic - out.numeric) <= 1e-8 * static_cast<double>(n);
  return out;
}

}  // namespace lsm
