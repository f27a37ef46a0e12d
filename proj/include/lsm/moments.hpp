#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "lsm/model.hpp"

namespace lsm {

/// The seven moment parameters of a symmetric latent space model.
///
///   p   = E[f | same label]           p'  = E[f² | same label]
///   q   = E[f | diff label] / p       q'  = E[f² | diff label] / p'
///   r   = E[f(x_i,x_k) f(x_j,x_k) | y_i = y_j = y_k]
///   s0  = E[...  | y_i = y_j != y_k] / r
///   s1  = E[...  | y_i = y_k != y_j] / r
struct Moments {
  double p = 0.0;
  double p_prime = 0.0;
  double q = 0.0;
  double q_prime = 0.0;
  double r = 0.0;
  double s0 = 0.0;
  double s1 = 0.0;

  static constexpr std::array<std::string_view, 7> kNames = {"p", "p_prime", "q", "q_prime",
                                                             "r", "s0",      "s1"};
  std::array<double, 7> to_array() const { return {p, p_prime, q, q_prime, r, s0, s1}; }
};

struct GaussianMoments {
  Moments values;
  int d = 0;
  double mu_norm = 0.0;
  double sigma = 0.0;
};

struct MonteCarloMoments {
  Moments estimate;
  Moments standard_error;
  std::int64_t samples = 0;
};

/// Exact moments for N_d(±mu, sigma² I) latents under the squared-exponential
/// kernel. Power terms are evaluated as exp(-d/2 * log1p(.)).
GaussianMoments closed_form(int d, double mu_norm, double sigma);

/// Estimates all seven quantities by sampling latent pairs (p, p', q, q') and
/// triples (r, s0, s1) from the model's Gaussian latents under its kernel.
/// Every conditional case uses its own fresh draws. Ratio quantities are
/// ratios of mean estimates, with delta-method standard errors.
///
/// Sampling is split into a fixed number of shards with derived seeds, so
/// the result does not depend on `threads`.
MonteCarloMoments monte_carlo(const ModelParams& params, std::int64_t num_samples,
                              std::uint64_t seed, unsigned threads = 1);

}  // namespace lsm
