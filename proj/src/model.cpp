#include "lsm/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "lsm/error.hpp"

namespace lsm {

Labels::Labels(std::vector<int> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != 1 && values_[i] != -1) {
      std::ostringstream msg;
      msg << "label " << i << " is " << values_[i] << ", expected +1 or -1";
      throw InvalidInput(msg.str());
    }
  }
}

int Labels::sum() const { return std::accumulate(values_.begin(), values_.end(), 0); }

bool Labels::is_balanced() const { return sum() == 0; }

Labels Labels::flipped() const {
  std::vector<int> v(values_);
  for (int& x : v) x = -x;
  return Labels(std::move(v));
}

Labels Labels::sign_normalized() const {
  if (!values_.empty() && values_.front() < 0) return flipped();
  return *this;
}

Vector Labels::to_vector() const {
  Vector v(static_cast<Eigen::Index>(values_.size()));
  for (std::size_t i = 0; i < values_.size(); ++i) v[static_cast<Eigen::Index>(i)] = values_[i];
  return v;
}

Matrix Labels::outer() const {
  const Vector v = to_vector();
  return v * v.transpose();
}

Kernel::Kernel(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

Kernel Kernel::squared_exponential() {
  return Kernel("sqexp", [](PointRef a, PointRef b) {
    return std::exp(-(a - b).squaredNorm());
  });
}

Kernel Kernel::inverse_quadratic() {
  return Kernel("invquad", [](PointRef a, PointRef b) {
    return 1.0 / (1.0 + (a - b).squaredNorm());
  });
}

Kernel Kernel::by_name(const std::string& name) {
  if (name == "sqexp") return squared_exponential();
  if (name == "invquad") return inverse_quadratic();
  throw InvalidParameter("unknown kernel '" + name + "'");
}

double Kernel::operator()(PointRef a, PointRef b) const {
  const double v = fn_(a, b);
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream msg;
    msg << "kernel '" << name_ << "' returned " << v << ", outside [0, 1]";
    throw KernelRangeError(msg.str());
  }
  return v;
}

void ModelParams::validate() const {
  if (n < 4 || n % 2 != 0)
    throw InvalidParameter("n must be an even integer >= 4, got " + std::to_string(n));
  if (d < 1) throw InvalidParameter("d must be >= 1, got " + std::to_string(d));
  if (!(sigma > 0.0)) throw InvalidParameter("sigma must be positive");
  if (!(mu_norm >= 0.0)) throw InvalidParameter("mu_norm must be non-negative");
}

RowVector ModelParams::mean_vector() const {
  RowVector mu = RowVector::Zero(d);
  mu[0] = mu_norm;
  return mu;
}

Labels sample_labels(int n, Engine& rng) {
  if (n <= 0 || n % 2 != 0)
    throw InvalidParameter("label count must be a positive even integer, got " + std::to_string(n));
  std::vector<int> v(static_cast<std::size_t>(n), 1);
  std::fill(v.begin() + n / 2, v.end(), -1);
  // Fisher-Yates with an explicit uniform draw; std::shuffle's draw pattern
  // is implementation-defined.
  for (std::size_t i = v.size() - 1; i > 0; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i);
    std::swap(v[i], v[pick(rng)]);
  }
  return Labels(std::move(v));
}

Matrix sample_latents(const Labels& labels, const ModelParams& params, Engine& rng) {
  if (params.d < 1) throw InvalidParameter("d must be >= 1");
  if (!(params.sigma > 0.0)) throw InvalidParameter("sigma must be positive");
  if (!(params.mu_norm >= 0.0)) throw InvalidParameter("mu_norm must be non-negative");
  const auto n = static_cast<Eigen::Index>(labels.size());
  const RowVector mu = params.mean_vector();
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix x(n, params.d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < params.d; ++k) x(i, k) = params.sigma * gauss(rng);
    x.row(i) += labels[static_cast<std::size_t>(i)] * mu;
  }
  return x;
}

Matrix sample_adjacency(const Matrix& latents, const Kernel& kernel, Engine& rng) {
  const Eigen::Index n = latents.rows();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double f = kernel(latents.row(i), latents.row(j));
      if (unif(rng) < f) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }
  return a;
}

Matrix edge_probabilities(const Matrix& latents, const Kernel& kernel) {
  const Eigen::Index n = latents.rows();
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double f = kernel(latents.row(i), latents.row(j));
      p(i, j) = f;
      p(j, i) = f;
    }
  }
  return p;
}

LsmInstance generate(const ModelParams& params, std::uint64_t seed) {
  params.validate();
  LsmInstance inst{params, seed, {}, {}, {}};
  Engine label_rng = make_engine(seed, Stream::kLabels);
  Engine latent_rng = make_engine(seed, Stream::kLatents);
  Engine edge_rng = make_engine(seed, Stream::kEdges);
  inst.labels = sample_labels(params.n, label_rng);
  inst.latents = sample_latents(inst.labels, params, latent_rng);
  inst.adjacency = sample_adjacency(inst.latents, params.kernel, edge_rng);
  return inst;
}

void validate_adjacency(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("adjacency matrix is not square");
  const Eigen::Index n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (a(j, j) != 0.0)
      throw InvalidInput("adjacency diagonal entry " + std::to_string(j) + " is non-zero");
    for (Eigen::Index i = 0; i < j; ++i) {
      const double v = a(i, j);
      if (v != 0.0 && v != 1.0)
        throw InvalidInput("adjacency entry (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") is not 0/1");
      if (v != a(j, i))
        throw InvalidInput("adjacency is not symmetric at (" + std::to_string(i) + ", " +
                           std::to_string(j) + ")");
    }
  }
}

void spot_check_kernel(const Kernel& kernel, int d, Engine& rng, int samples) {
  std::normal_distribution<double> gauss(0.0, 2.0);
  RowVector a(d), b(d);
  for (int s = 0; s < samples; ++s) {
    for (int k = 0; k < d; ++k) {
      a[k] = gauss(rng);
      b[k] = gauss(rng);
    }
    const double ab = kernel(a, b);
    const double ba = kernel(b, a);
    if (std::abs(ab - ba) > 1e-12)
      throw InvalidParameter("kernel '" + kernel.name() + "' is not symmetric");
  }
}

}  // namespace lsm
