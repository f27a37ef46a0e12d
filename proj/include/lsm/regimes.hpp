#pragma once

#include <optional>
#include <string>

#include "lsm/moments.hpp"

namespace lsm {

enum class Relation { kLessEqual, kGreaterEqual };

/// One evaluated inequality. `holds` is always exactly the comparison of the
/// recorded sides; a NaN side makes it false.
struct Condition {
  double lhs = 0.0;
  double rhs = 0.0;
  Relation relation = Relation::kLessEqual;
  bool holds = false;

  static Condition evaluate(double lhs, double rhs, Relation relation);
};

/// Constants of the sufficient conditions. The MLE conditions need
/// c0 > 25/2; the SDP conditions need every constant positive.
struct RegimeConstants {
  double mle_c0 = 13.0;
  double mle_c1 = 500.0;
  double sdp_c0 = 1.0;
  double sdp_c1 = 500.0;
  double sdp_c2 = 500.0;
};

/// Information-theoretic failure: -p log q <= 3 log 2 / (10 n).
struct ImpossibleCheck {
  bool applicable = false;  // requires n >= 10
  Condition fano;
  bool verdict() const { return applicable && fano.holds; }
};

struct MleCheck {
  double c0 = 0.0;
  double c1 = 0.0;
  /// p²(1-q)² >= 3375 log n / n + 75 log(2 c0 / 25) / n
  Condition separation;
  /// 32 p^-2 (1-q)^-2 (p'(1+q') - p²(1+q²)) <= c1 / n²
  Condition concentration;
  double success_bound = 0.0;  // 1 - (c0 + c1) / n
  bool verdict() const { return separation.holds && concentration.holds; }
};

struct SdpCheck {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  /// p(1+q) <= 1; without it no verdict is issued.
  Condition precondition;
  /// p²(1-q)² >= 512 log n / n - log c0 / n
  Condition separation;
  /// The three-line degree condition, summed as written, <= c1.
  Condition degree;
  /// 32 n (1-q)^-2 (p' p^-2 (1+q') - (1+q²)) <= c2
  Condition adjacency;
  double success_bound = 0.0;  // 1 - (2 c0 + c1 + c2) / n
  /// Empty when the precondition fails.
  std::optional<bool> verdict() const;
};

/// The three regime evaluations side by side. They are one-sided
/// conditions, so a point may satisfy several or none.
struct RegimeReport {
  int n = 0;
  Moments moments;
  RegimeConstants constants;
  ImpossibleCheck impossible;
  MleCheck mle;
  SdpCheck sdp;

  /// "impossible", "mle", "sdp" joined by '+', or "indeterminate" when no
  /// condition holds.
  std::string label() const;
};

ImpossibleCheck check_impossible(int n, const Moments& m);
/// Throws InvalidParameter unless c0 > 25/2 and c1 > 0.
MleCheck check_mle(int n, const Moments& m, double c0, double c1);
/// Throws InvalidParameter unless c0, c1, c2 > 0.
SdpCheck check_sdp(int n, const Moments& m, double c0, double c1, double c2);
RegimeReport classify(int n, const Moments& m, const RegimeConstants& constants = {});

}  // namespace lsm
