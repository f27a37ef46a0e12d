#pragma once

#include <cstdint>

#include "lsm/model.hpp"

namespace lsm {

inline constexpr int kMaxBruteForceNodes = 24;

struct MleOptions {
  /// Restrict the search to vectors with sum zero.
  bool balanced_only = false;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct MleResult {
  /// Lexicographically first optimum (with -1 < +1) among sign-normalized
  /// vectors, i.e. entry 0 is +1.
  Labels best_labels;
  std::int64_t best_objective = 0;
  /// Distinct optimal Y = yyᵀ, so y and -y count once.
  std::int64_t num_optima = 0;
  bool is_unique() const { return num_optima == 1; }
};

/// yᵀ(2A - 11ᵀ + I)y, computed in exact integer arithmetic.
std::int64_t mle_objective(const Matrix& adjacency, const Labels& labels);

/// Exhaustive maximization of yᵀ(2A - 11ᵀ + I)y over {±1}^n via a Gray-code
/// walk of the 2^(n-1) sign classes. Throws ResourceLimit for n > 24.
MleResult brute_force_mle(const Matrix& adjacency, const MleOptions& options = {});

/// <Y*, Y* - Y> for Y = yyᵀ, Y* = y*y*ᵀ; twice the number of entries in which
/// the two rank-one matrices differ.
std::int64_t y_distance(const Labels& y, const Labels& y_star);

}  // namespace lsm
