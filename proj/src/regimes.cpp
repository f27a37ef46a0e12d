#include "lsm/regimes.hpp"

#include <cmath>

#include "lsm/error.hpp"

namespace lsm {

Condition Condition::evaluate(double lhs, double rhs, Relation relation) {
  Condition c{lhs, rhs, relation, false};
  c.holds = relation == Relation::kLessEqual ? lhs <= rhs : lhs >= rhs;
  return c;
}

std::optional<bool> SdpCheck::verdict() const {
  if (!precondition.holds) return std::nullopt;
  return separation.holds && degree.holds && adjacency.holds;
}

std::string RegimeReport::label() const {
  std::string out;
  auto add = [&](const char* name) {
    if (!out.empty()) out += '+';
    out += name;
  };
  if (impossible.verdict()) add("impossible");
  if (mle.verdict()) add("mle");
  if (sdp.verdict().value_or(false)) add("sdp");
  return out.empty() ? "indeterminate" : out;
}

ImpossibleCheck check_impossible(int n, const Moments& m) {
  ImpossibleCheck out;
  out.applicable = n >= 10;
  // q = 0 makes log q = -inf and the left side +inf; q = 1 makes it 0.
  const double lhs = m.q <= 0.0 ? INFINITY : -m.p * std::log(m.q);
  const double rhs = 3.0 * std::log(2.0) / (10.0 * n);
  out.fano = Condition::evaluate(lhs, rhs, Relation::kLessEqual);
  return out;
}

MleCheck check_mle(int n, const Moments& m, double c0, double c1) {
  if (!(c0 > 12.5)) throw InvalidParameter("MLE constant c0 must exceed 25/2");
  if (!(c1 > 0.0)) throw InvalidParameter("MLE constant c1 must be positive");
  if (n < 2) throw InvalidParameter("n must be >= 2");
  const double nn = n;
  const double one_minus_q = 1.0 - m.q;
  const double signal = m.p * m.p * one_minus_q * one_minus_q;

  MleCheck out;
  out.c0 = c0;
  out.c1 = c1;
  out.separation = Condition::evaluate(
      signal, 3375.0 * std::log(nn) / nn + 75.0 * std::log(2.0 * c0 / 25.0) / nn,
      Relation::kGreaterEqual);
  const double spread = m.p_prime * (1.0 + m.q_prime) - m.p * m.p * (1.0 + m.q * m.q);
  out.concentration = Condition::evaluate(32.0 * spread / signal, c1 / (nn * nn),
                                          Relation::kLessEqual);
  out.success_bound = 1.0 - (c0 + c1) / nn;
  return out;
}

SdpCheck check_sdp(int n, const Moments& m, double c0, double c1, double c2) {
  if (!(c0 > 0.0 && c1 > 0.0 && c2 > 0.0))
    throw InvalidParameter("SDP constants c0, c1, c2 must be positive");
  if (n < 2) throw InvalidParameter("n must be >= 2");
  const double nn = n;
  const double p = m.p, q = m.q, pp = m.p_prime, qp = m.q_prime, r = m.r;
  const double s0 = m.s0, s1 = m.s1;
  const double inv_1mq = 1.0 / (1.0 - q);
  const double inv_1mq2 = inv_1mq * inv_1mq;
  const double inv_p2 = 1.0 / (p * p);

  SdpCheck out;
  out.c0 = c0;
  out.c1 = c1;
  out.c2 = c2;
  out.precondition = Condition::evaluate(p * (1.0 + q), 1.0, Relation::kLessEqual);
  out.separation =
      Condition::evaluate(p * p * (1.0 - q) * (1.0 - q),
                          512.0 * std::log(nn) / nn - std::log(c0) / nn, Relation::kGreaterEqual);

  const double line1 = 4.0 * nn * (4.0 * nn * r * inv_p2 * inv_1mq2 * (1.0 - s0 - 2.0 * s1) - 1.0);
  const double line2 = 32.0 * nn *
                        (2.0 * inv_1mq - 2.0 * pp * inv_p2 * inv_1mq2 +
                         r * inv_p2 * inv_1mq2 * (3.0 - s0 - 2.0 * s1));
  const double line3 = 64.0 * (2.0 * r * inv_p2 * inv_1mq2 - pp * inv_p2 * inv_1mq2 - inv_1mq2);
  out.degree = Condition::evaluate(line1 + line2 + line3, c1, Relation::kLessEqual);

  out.adjacency = Condition::evaluate(
      32.0 * nn * inv_1mq2 * (pp * inv_p2 * (1.0 + qp) - (1.0 + q * q)), c2, Relation::kLessEqual);
  out.success_bound = 1.0 - (2.0 * c0 + c1 + c2) / nn;
  return out;
}

RegimeReport classify(int n, const Moments& m, const RegimeConstants& constants) {
  RegimeReport out;
  out.n = n;
  out.moments = m;
  out.constants = constants;
  out.impossible = check_impossible(n, m);
  out.mle = check_mle(n, m, constants.mle_c0, constants.mle_c1);
  out.sdp = check_sdp(n, m, constants.sdp_c0, constants.sdp_c1, constants.sdp_c2);
  return out;
}

}  // namespace lsm
