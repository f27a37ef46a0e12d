#pragma once

#include <array>
#include <optional>

#include "lsm/model.hpp"
#include "lsm/moments.hpp"

namespace lsm {

/// Dual-certificate check for y* being the unique SDP optimum.
///
/// With D = diag(d), d_i = sum_j A_ij y*_i y*_j, the diagonal matrix
/// M = 2D + I closes the duality gap; it is feasible iff
/// S = 2D - 2A + 11ᵀ is PSD, and the optimum is unique when lambda_2(S) > 0.
struct CertificateReport {
  Vector degrees;
  double lambda_min = 0.0;
  /// Second-smallest eigenvalue of S, counted with multiplicity.
  double lambda_2 = 0.0;
  double eig_tol = 0.0;
  bool psd = false;     // lambda_min >= -eig_tol
  bool unique = false;  // psd and lambda_2 > eig_tol
  /// tr(W y*y*ᵀ) and tr(2D + I), which agree identically.
  double primal_value = 0.0;
  double dual_value = 0.0;
  bool gap_identity_ok = false;
  /// ||S y*||_inf; y* is always a null vector of S.
  double null_residual = 0.0;

  bool certified() const { return psd && unique; }
};

/// Signed degrees d_i = (within-community degree) - (cross-community degree).
Vector degree_vector(const Matrix& adjacency, const Labels& y_star);

/// S = 2D - 2A + 11ᵀ.
Matrix certificate_matrix(const Matrix& adjacency, const Labels& y_star);

/// Default eigenvalue tolerance, 1e-8 * n.
double default_eig_tol(Eigen::Index n);

/// Full symmetric eigendecomposition of S. eig_tol <= 0 selects the default.
CertificateReport certify(const Matrix& adjacency, const Labels& y_star, double eig_tol = 0.0);

/// Four concentration margins whose joint positivity (together with
/// p(1+q) <= 1) forces lambda_2(S) > 0. Each is np(1-q)/8 adjusted by one
/// deviation:
///   [0] + min_i (d_i - E[d_i | X])
///   [1] - lambda_max(A - E[A | X])
///   [2] - ||E[D | X] - E[D]||
///   [3] - ||E[A | X] - E[A]||
struct ConcentrationMargins {
  double base = 0.0;
  std::array<double, 4> margins{};
  bool all_positive() const;
};

/// Needs the latent positions; returns nullopt for an empty latent matrix.
std::optional<ConcentrationMargins> concentration_margins(const Matrix& adjacency,
                                                          const Matrix& latents,
                                                          const Kernel& kernel,
                                                          const Labels& y_star,
                                                          const Moments& moments);

/// E[A] = ½p(1+q)11ᵀ + ½p(1-q)y*y*ᵀ - pI.
Matrix expected_adjacency(const Labels& y_star, double p, double q);
/// E[D] = (½np(1-q) - p) I, returned as its diagonal.
Vector expected_degrees(Eigen::Index n, double p, double q);

struct ExpectedSpectrum {
  double analytic = 0.0;  // np(1-q)
  double numeric = 0.0;   // lambda_2(2E[D] - 2E[A] + 11ᵀ)
  bool precondition_ok = false;
  bool agrees = false;  // |analytic - numeric| <= 1e-8 n
};

/// Second-smallest eigenvalue of the expected certificate matrix, both in
/// closed form and by building the matrix (labels: first half +1).
ExpectedSpectrum expected_matrix_lambda2(int n, double p, double q);

}  // namespace lsm
