#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include "lsm/certificate.hpp"
#include "lsm/error.hpp"
#include "lsm/moments.hpp"
#include "lsm/sdp.hpp"

using namespace lsm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Matrix perfect4() {
  Matrix a = Matrix::Zero(4, 4);
  a(0, 1) = a(1, 0) = a(2, 3) = a(3, 2) = 1.0;
  return a;
}

// Eigen's own QR-based solver; shares no code with the LAPACK path.
Vector oracle_eigenvalues(const Matrix& s) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(s, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

TEST_CASE("signed degrees", "[certificate]") {
  const Labels y({1, 1, -1, -1});
  CHECK(degree_vector(perfect4(), y) == Vector::Ones(4));
  CHECK(degree_vector(Matrix::Zero(4, 4), y).isZero());

  const int n = 8;
  const Matrix complete = Matrix::Ones(n, n) - Matrix::Identity(n, n);
  CHECK(degree_vector(complete, Labels({1, -1, 1, -1, 1, -1, 1, -1})) == -Vector::Ones(n));
  CHECK_THROWS_AS(degree_vector(perfect4(), Labels({1, -1})), InvalidInput);
}

TEST_CASE("perfect graph certificate", "[certificate]") {
  const Labels y({1, 1, -1, -1});
  const Matrix s = certificate_matrix(perfect4(), y);
  const Vector eig = oracle_eigenvalues(s);
  CHECK_THAT(eig[0], WithinAbs(0.0, 1e-12));
  for (int k = 1; k < 4; ++k) CHECK_THAT(eig[k], WithinAbs(4.0, 1e-12));

  const CertificateReport rep = certify(perfect4(), y);
  CHECK_THAT(rep.lambda_min, WithinAbs(0.0, 1e-12));
  CHECK_THAT(rep.lambda_2, WithinAbs(4.0, 1e-12));
  CHECK(rep.psd);
  CHECK(rep.unique);
  CHECK(rep.certified());
  CHECK(rep.gap_identity_ok);
  CHECK(rep.primal_value == 12.0);
  CHECK(rep.dual_value == 12.0);
  CHECK(rep.eig_tol == default_eig_tol(4));
}

TEST_CASE("empty graph has no unique certificate", "[certificate]") {
  const CertificateReport rep = certify(Matrix::Zero(6, 6), Labels({1, -1, 1, -1, 1, -1}));
  CHECK_THAT(rep.lambda_2, WithinAbs(0.0, 1e-12));
  CHECK(rep.psd);
  CHECK_FALSE(rep.unique);
  CHECK_FALSE(rep.certified());
}

TEST_CASE("certify rejects unbalanced or mismatched labels", "[certificate]") {
  CHECK_THROWS_AS(certify(perfect4(), Labels({1, 1, 1, -1})), InvalidInput);
  CHECK_THROWS_AS(certify(perfect4(), Labels({1, -1})), InvalidInput);
}

TEST_CASE("certificate invariants on generated instances", "[certificate]") {
  for (double sigma : {0.1, 0.3, 0.6})
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      ModelParams p;
      p.n = 60;
      p.sigma = sigma;
      const LsmInstance inst = generate(p, seed);
      const CertificateReport rep = certify(inst.adjacency, inst.labels);
      CHECK(rep.gap_identity_ok);
      CHECK(rep.primal_value == rep.dual_value);
      CHECK(rep.null_residual <= p.n * rep.eig_tol);
      CHECK(rep.lambda_min <= rep.lambda_2);
      if (rep.unique) CHECK(rep.psd);

      const Vector eig = oracle_eigenvalues(certificate_matrix(inst.adjacency, inst.labels));
      CHECK_THAT(rep.lambda_min, WithinAbs(eig[0], 1e-8 * p.n));
      CHECK_THAT(rep.lambda_2, WithinAbs(eig[1], 1e-8 * p.n));
    }
}

TEST_CASE("expected certificate spectrum", "[certificate]") {
  const ExpectedSpectrum e = expected_matrix_lambda2(100, 0.5, 0.2);
  CHECK(e.precondition_ok);
  CHECK_THAT(e.analytic, WithinRel(40.0, 1e-14));
  CHECK_THAT(e.numeric, WithinAbs(40.0, 1e-8 * 100));
  CHECK(e.agrees);

  for (int n : {10, 50, 200})
    for (double p : {0.1, 0.5, 0.9})
      for (double q : {0.0, 0.1, 0.5}) {
        if (p * (1 + q) > 1) continue;
        const ExpectedSpectrum s = expected_matrix_lambda2(n, p, q);
        CHECK(s.agrees);
        CHECK_THAT(s.numeric, WithinAbs(n * p * (1 - q), 1e-8 * n));
      }

  CHECK_FALSE(expected_matrix_lambda2(100, 0.9, 0.5).precondition_ok);
  CHECK_THROWS_AS(expected_matrix_lambda2(7, 0.5, 0.2), InvalidParameter);
}

TEST_CASE("expected adjacency and degrees", "[certificate]") {
  const Labels y({1, -1, 1, -1});
  const Matrix ea = expected_adjacency(y, 0.6, 0.5);
  CHECK_THAT(ea(0, 0), WithinAbs(0.0, 1e-15));
  CHECK_THAT(ea(0, 2), WithinAbs(0.6, 1e-15));
  CHECK_THAT(ea(0, 1), WithinAbs(0.3, 1e-15));
  const Vector ed = expected_degrees(4, 0.6, 0.5);
  CHECK_THAT(ed[0], WithinAbs(0.5 * 4 * 0.6 * 0.5 - 0.6, 1e-15));
}

TEST_CASE("positive concentration margins imply a unique certificate", "[certificate]") {
  int all_positive = 0;
  for (double sigma : {0.05, 0.1, 0.2})
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      ModelParams p;
      p.n = 200;
      p.sigma = sigma;
      p.mu_norm = 1.5;
      const LsmInstance inst = generate(p, seed);
      const Moments m = closed_form(p.d, p.mu_norm, p.sigma).values;
      const auto margins = concentration_margins(inst.adjacency, inst.latents, p.kernel, inst.labels, m);
      REQUIRE(margins.has_value());
      CHECK_THAT(margins->base, WithinRel(p.n * m.p * (1 - m.q) / 8, 1e-12));
      if (margins->all_positive() && m.p * (1 + m.q) <= 1) {
        ++all_positive;
        CHECK(certify(inst.adjacency, inst.labels).unique);
      }
    }
  CHECK(all_positive > 0);

  ModelParams p;
  p.n = 20;
  const LsmInstance inst = generate(p, 1);
  CHECK_FALSE(concentration_margins(inst.adjacency, Matrix(), p.kernel, inst.labels,
                                    closed_form(2, 1.0, 0.3).values)
                  .has_value());
}

TEST_CASE("degenerate latents leave the expectation margins near the base", "[certificate]") {
  ModelParams p;
  p.n = 100;
  p.sigma = 1e-9;
  p.mu_norm = 3.0;
  const LsmInstance inst = generate(p, 2);
  const Moments m = closed_form(p.d, p.mu_norm, p.sigma).values;
  const auto margins = concentration_margins(inst.adjacency, inst.latents, p.kernel, inst.labels, m);
  REQUIRE(margins.has_value());
  CHECK_THAT(margins->margins[2], WithinAbs(margins->base, 1e-6));
  CHECK_THAT(margins->margins[3], WithinAbs(margins->base, 1e-6));
}

TEST_CASE("certified instances are solved exactly", "[certificate][sdp]") {
  int certified = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    ModelParams p;
    p.n = 60;
    p.sigma = 0.15;
    const LsmInstance inst = generate(p, seed);
    if (!certify(inst.adjacency, inst.labels).certified()) continue;
    ++certified;
    const SdpSolution s = solve(inst.adjacency);
    CHECK(s.converged);
    CHECK(success_test(s.Y, inst.labels));
  }
  CHECK(certified > 0);
}
