#include <catch_amalgamated.hpp>

#include <cmath>

#include "lsm/error.hpp"
#include "lsm/moments.hpp"

using namespace lsm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("closed form matches frozen high-precision values", "[moments]") {
  // Evaluated independently at 30 significant digits (d=2, |mu|=1, sigma=0.3).
  const Moments m = closed_form(2, 1.0, 0.3).values;
  CHECK_THAT(m.p, WithinRel(0.735294117647059, 1e-13));
  CHECK_THAT(m.p_prime, WithinRel(0.581395348837209, 1e-13));
  CHECK_THAT(m.q, WithinRel(0.0528035703343005, 1e-13));
  CHECK_THAT(m.q_prime, WithinRel(0.00955049025029501, 1e-13));
  CHECK_THAT(m.r, WithinRel(0.550297160466652, 1e-13));
  CHECK_THAT(m.s0, WithinRel(0.00554529646233709, 1e-13));
  CHECK_THAT(m.s1, WithinRel(0.0501058980165762, 1e-13));
  CHECK_THAT(m.p * (1 + m.q), WithinRel(0.774120272304633, 1e-12));

  const Moments tight = closed_form(2, 1.0, 0.05).values;
  CHECK_THAT(tight.p, WithinRel(0.99009900990099, 1e-13));
  CHECK_THAT(tight.q, WithinRel(0.0190555660381796, 1e-13));
  CHECK_THAT(tight.p * (1 + tight.q), WithinRel(1.0089659069684947, 1e-12));
}

TEST_CASE("closed form boundary cases", "[moments]") {
  for (int d : {1, 2, 5}) {
    const Moments zero = closed_form(d, 0.0, 0.4).values;
    CHECK(zero.q == 1.0);
    CHECK(zero.q_prime == 1.0);
    CHECK(zero.s0 == 1.0);
    CHECK(zero.s1 == 1.0);

    const Moments tiny = closed_form(d, 1.0, 1e-9).values;
    CHECK_THAT(tiny.p, WithinAbs(1.0, 1e-12));
    CHECK_THAT(tiny.p_prime, WithinAbs(1.0, 1e-12));
    CHECK_THAT(tiny.r, WithinAbs(1.0, 1e-12));
  }
  // Large sigma stays positive and finite.
  const Moments wide = closed_form(50, 1.0, 100.0).values;
  CHECK(wide.p > 0.0);
  CHECK(std::isfinite(std::log(wide.p)));

  CHECK_THROWS_AS(closed_form(2, 1.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(closed_form(0, 1.0, 0.3), InvalidParameter);
  CHECK_THROWS_AS(closed_form(2, -1.0, 0.3), InvalidParameter);
}

TEST_CASE("all moments lie in (0, 1] with ordering", "[moments]") {
  for (int d = 1; d <= 4; ++d)
    for (double mu : {0.0, 0.25, 0.5, 1.0, 2.0})
      for (double sigma : {0.05, 0.1, 0.2, 0.3, 0.5, 1.0}) {
        const Moments m = closed_form(d, mu, sigma).values;
        for (double v : m.to_array()) {
          CHECK(v > 0.0);
          CHECK(v <= 1.0);
        }
        CHECK(m.p_prime <= m.p);
        CHECK(m.q_prime * m.p_prime <= m.q * m.p);
      }
}

TEST_CASE("closed forms are monotone", "[moments]") {
  for (int d = 1; d <= 3; ++d) {
    Moments prev = closed_form(d, 1.0, 0.05).values;
    for (double sigma = 0.1; sigma <= 1.0; sigma += 0.05) {
      const Moments m = closed_form(d, 1.0, sigma).values;
      CHECK(m.p < prev.p);
      CHECK(m.p_prime < prev.p_prime);
      CHECK(m.r < prev.r);
      prev = m;
    }
    prev = closed_form(d, 0.0, 0.3).values;
    for (double mu = 0.1; mu <= 2.0; mu += 0.1) {
      const Moments m = closed_form(d, mu, 0.3).values;
      CHECK(m.q < prev.q);
      CHECK(m.q_prime < prev.q_prime);
      CHECK(m.s0 < prev.s0);
      CHECK(m.s1 < prev.s1);
      prev = m;
    }
  }
}

TEST_CASE("Monte-Carlo agrees with the closed form", "[moments][statistical]") {
  const std::int64_t samples = 200000;
  std::uint64_t seed = 100;
  for (int d : {1, 2, 3})
    for (double mu : {0.0, 0.5, 1.0})
      for (double sigma : {0.2, 0.5}) {
        ModelParams params;
        params.d = d;
        params.mu_norm = mu;
        params.sigma = sigma;
        const auto mc = monte_carlo(params, samples, seed++);
        const auto exact = closed_form(d, mu, sigma).values.to_array();
        const auto est = mc.estimate.to_array();
        const auto se = mc.standard_error.to_array();
        for (std::size_t k = 0; k < exact.size(); ++k) {
          INFO("d=" << d << " mu=" << mu << " sigma=" << sigma << " " << Moments::kNames[k]);
          CHECK(std::abs(est[k] - exact[k]) <= 4.0 * se[k] + 1e-12);
        }
      }
}

TEST_CASE("Monte-Carlo is reproducible and thread-count independent", "[moments]") {
  ModelParams params;
  const auto a = monte_carlo(params, 20000, 5, 1);
  const auto b = monte_carlo(params, 20000, 5, 3);
  CHECK(a.estimate.to_array() == b.estimate.to_array());
  CHECK(a.standard_error.to_array() == b.standard_error.to_array());
  CHECK(a.samples == 20000);
  const auto c = monte_carlo(params, 20000, 6, 1);
  CHECK(a.estimate.p != c.estimate.p);
  CHECK_THROWS_AS(monte_carlo(params, 999, 5), InvalidParameter);
}

TEST_CASE("Monte-Carlo handles kernels without closed forms", "[moments]") {
  ModelParams params;
  params.kernel = Kernel::inverse_quadratic();
  const auto mc = monte_carlo(params, 20000, 1);
  for (double v : mc.estimate.to_array()) {
    CHECK(v > 0.0);
    CHECK(v <= 1.0 + 1e-12);
  }
  CHECK(mc.estimate.p_prime <= mc.estimate.p);
}
