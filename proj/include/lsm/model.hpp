#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lsm/rng.hpp"

namespace lsm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
/// A latent point; binds to matrix rows without copying.
using PointRef = Eigen::Ref<const RowVector, 0, Eigen::InnerStride<>>;

/// A vector of +1/-1 community labels.
///
/// Balance is not enforced by the type itself: SDP rounding may legitimately
/// produce unbalanced candidates. Ground-truth labels come from
/// sample_labels() and are always balanced.
class Labels {
 public:
  Labels() = default;
  explicit Labels(std::vector<int> values);

  std::size_t size() const { return values_.size(); }
  int operator[](std::size_t i) const { return values_[i]; }
  const std::vector<int>& values() const { return values_; }

  bool is_balanced() const;
  int sum() const;
  Labels flipped() const;
  /// Same labels with the global sign chosen so that entry 0 is +1.
  Labels sign_normalized() const;
  Vector to_vector() const;
  /// y yᵀ
  Matrix outer() const;

  friend bool operator==(const Labels&, const Labels&) = default;

 private:
  std::vector<int> values_;
};

/// Symmetric edge-probability function f(x, x') with range [0, 1].
///
/// Every call through operator() checks the range and throws
/// KernelRangeError when violated.
class Kernel {
 public:
  using Fn = std::function<double(PointRef, PointRef)>;

  Kernel(std::string name, Fn fn);

  /// f(x, x') = exp(-||x - x'||²). The only kernel with closed-form moments.
  static Kernel squared_exponential();
  /// f(x, x') = 1 / (1 + ||x - x'||²).
  static Kernel inverse_quadratic();
  /// Looks up a kernel by name ("sqexp", "invquad").
  static Kernel by_name(const std::string& name);

  const std::string& name() const { return name_; }
  bool has_closed_form_moments() const { return name_ == "sqexp"; }

  double operator()(PointRef a, PointRef b) const;

 private:
  std::string name_;
  Fn fn_;
};

struct ModelParams {
  int n = 300;
  int d = 2;
  double mu_norm = 1.0;
  double sigma = 0.3;
  Kernel kernel = Kernel::squared_exponential();

  /// Throws InvalidParameter unless n is even and >= 4, d >= 1, sigma > 0
  /// and mu_norm >= 0.
  void validate() const;
  /// The class mean for label +1; the mean for -1 is its negation.
  RowVector mean_vector() const;
};

struct LsmInstance {
  ModelParams params;
  std::uint64_t seed = 0;
  Labels labels;
  Matrix latents;    // n x d
  Matrix adjacency;  // n x n, symmetric 0/1, zero diagonal
};

/// Balanced labels: a half/half vector shuffled uniformly.
Labels sample_labels(int n, Engine& rng);

/// Row i ~ N_d(y_i * mu, sigma² I) with mu along the first axis.
Matrix sample_latents(const Labels& labels, const ModelParams& params, Engine& rng);

/// Independent Bernoulli(f(x_i, x_j)) edges for i < j, mirrored.
Matrix sample_adjacency(const Matrix& latents, const Kernel& kernel, Engine& rng);

/// E[A | X]: f(x_i, x_j) off the diagonal, zero on it.
Matrix edge_probabilities(const Matrix& latents, const Kernel& kernel);

/// Labels, latents and edges from independent streams of one master seed.
LsmInstance generate(const ModelParams& params, std::uint64_t seed);

/// Throws InvalidInput unless a is square, symmetric, 0/1 with a zero diagonal.
void validate_adjacency(const Matrix& a);

/// Draws random pairs and checks symmetry and range of the kernel.
/// Throws KernelRangeError or InvalidParameter on violation.
void spot_check_kernel(const Kernel& kernel, int d, Engine& rng, int samples = 256);

}  // namespace lsm
