#include "lsm/moments.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "lsm/error.hpp"

namespace lsm {
namespace {

// Running mean/variance with Chan et al. pooling for shard merges.
struct Accumulator {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const Accumulator& o) {
    if (o.count == 0) return;
    const auto na = static_cast<double>(count), nb = static_cast<double>(o.count);
    const double delta = o.mean - mean;
    const double total = na + nb;
    mean += delta * nb / total;
    m2 += o.m2 + delta * delta * na * nb / total;
    count += o.count;
  }

  double standard_error() const {
    if (count < 2) return 0.0;
    const double var = m2 / static_cast<double>(count - 1);
    return std::sqrt(var / static_cast<double>(count));
  }
};

enum Slot { kWithin, kWithinSq, kCross, kCrossSq, kTripleSame, kTripleS0, kTripleS1, kSlots };

struct ShardResult {
  std::array<Accumulator, kSlots> acc;
};

constexpr int kShards = 16;

ShardResult run_shard(const ModelParams& params, std::int64_t samples, std::uint64_t seed) {
  Engine rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  const RowVector mu = params.mean_vector();
  RowVector a(params.d), b(params.d), c(params.d);

  auto draw = [&](RowVector& x, double sign) {
    for (int k = 0; k < params.d; ++k) x[k] = params.sigma * gauss(rng);
    x += sign * mu;
  };

  ShardResult out;
  const Kernel& f = params.kernel;
  for (std::int64_t s = 0; s < samples; ++s) {
    const double sign = coin(rng) ? 1.0 : -1.0;

    draw(a, sign);
    draw(b, sign);
    const double within = f(a, b);
    out.acc[kWithin].add(within);
    out.acc[kWithinSq].add(within * within);

    draw(a, sign);
    draw(b, -sign);
    const double cross = f(a, b);
    out.acc[kCross].add(cross);
    out.acc[kCrossSq].add(cross * cross);

    // (i, j, k) all same label.
    draw(a, sign);
    draw(b, sign);
    draw(c, sign);
    out.acc[kTripleSame].add(f(a, c) * f(b, c));

    // y_i = y_j != y_k
    draw(a, sign);
    draw(b, sign);
    draw(c, -sign);
    out.acc[kTripleS0].add(f(a, c) * f(b, c));

    // y_i = y_k != y_j
    draw(a, sign);
    draw(b, -sign);
    draw(c, sign);
    out.acc[kTripleS1].add(f(a, c) * f(b, c));
  }
  return out;
}

// num / den with independent estimates.
std::pair<double, double> ratio(const Accumulator& num, const Accumulator& den) {
  const double value = num.mean / den.mean;
  const double rel_num = num.mean != 0.0 ? num.standard_error() / num.mean : 0.0;
  const double rel_den = den.standard_error() / den.mean;
  const double se = std::abs(value) * std::sqrt(rel_num * rel_num + rel_den * rel_den);
  // A zero numerator mean still has sampling error in absolute terms.
  return {value, num.mean != 0.0 ? se : num.standard_error() / den.mean};
}

}  // namespace

GaussianMoments closed_form(int d, double mu_norm, double sigma) {
  if (d < 1) throw InvalidParameter("d must be >= 1");
  if (!(sigma > 0.0)) throw InvalidParameter("sigma must be positive");
  if (!(mu_norm >= 0.0)) throw InvalidParameter("mu_norm must be non-negative");
  const double s2 = sigma * sigma;
  const double m2 = mu_norm * mu_norm;
  const double half_d = 0.5 * static_cast<double>(d);

  GaussianMoments out;
  out.d = d;
  out.mu_norm = mu_norm;
  out.sigma = sigma;
  Moments& m = out.values;
  m.p = std::exp(-half_d * std::log1p(4.0 * s2));
  m.p_prime = std::exp(-half_d * std::log1p(8.0 * s2));
  m.q = std::exp(-4.0 * m2 / (4.0 * s2 + 1.0));
  m.q_prime = std::exp(-8.0 * m2 / (8.0 * s2 + 1.0));
  m.r = std::exp(-half_d * (std::log1p(2.0 * s2) + std::log1p(6.0 * s2)));
  m.s0 = std::exp(-8.0 * m2 / (6.0 * s2 + 1.0));
  m.s1 = std::exp(-4.0 * (4.0 * s2 + 1.0) * m2 / (12.0 * s2 * s2 + 8.0 * s2 + 1.0));
  return out;
}

MonteCarloMoments monte_carlo(const ModelParams& params, std::int64_t num_samples,
                              std::uint64_t seed, unsigned threads) {
  if (params.d < 1) throw InvalidParameter("d must be >= 1");
  if (!(params.sigma > 0.0)) throw InvalidParameter("sigma must be positive");
  if (!(params.mu_norm >= 0.0)) throw InvalidParameter("mu_norm must be non-negative");
  if (num_samples < 1000) throw InvalidParameter("Monte-Carlo needs at least 1000 samples");

  std::vector<ShardResult> shards(kShards);
  auto shard_size = [&](int s) {
    return num_samples / kShards + (s < num_samples % kShards ? 1 : 0);
  };
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int s = next++; s < kShards; s = next++)
      shards[static_cast<std::size_t>(s)] =
          run_shard(params, shard_size(s), derive_seed(seed, Stream::kMoments, static_cast<std::uint64_t>(s)));
  };
  threads = std::max(1u, std::min(threads, static_cast<unsigned>(kShards)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::array<Accumulator, kSlots> acc;
  for (const auto& shard : shards)
    for (int k = 0; k < kSlots; ++k) acc[k].merge(shard.acc[k]);

  MonteCarloMoments out;
  out.samples = num_samples;
  Moments& est = out.estimate;
  Moments& se = out.standard_error;
  est.p = acc[kWithin].mean;
  se.p = acc[kWithin].standard_error();
  est.p_prime = acc[kWithinSq].mean;
  se.p_prime = acc[kWithinSq].standard_error();
  std::tie(est.q, se.q) = ratio(acc[kCross], acc[kWithin]);
  std::tie(est.q_prime, se.q_prime) = ratio(acc[kCrossSq], acc[kWithinSq]);
  est.r = acc[kTripleSame].mean;
  se.r = acc[kTripleSame].standard_error();
  std::tie(est.s0, se.s0) = ratio(acc[kTripleS0], acc[kTripleSame]);
  std::tie(est.s1, se.s1) = ratio(acc[kTripleS1], acc[kTripleSame]);
  return out;
}

}  // namespace lsm
