#include "lsm/mle.hpp"

#include <algorithm>
#include <bit>
#include <thread>
#include <vector>

#include "lsm/error.hpp"

namespace lsm {
namespace {

struct ShardBest {
  std::int64_t objective = INT64_MIN;
  std::int64_t count = 0;
  std::vector<int> labels;
};

void offer(ShardBest& best, std::int64_t objective, const std::vector<int>& y) {
  if (objective > best.objective) {
    best.objective = objective;
    best.count = 1;
    best.labels = y;
  } else if (objective == best.objective) {
    ++best.count;
    if (std::lexicographical_compare(y.begin(), y.end(), best.labels.begin(), best.labels.end()))
      best.labels = y;
  }
}

// Entry 0 is pinned to +1. The top `prefix_bits` free entries are fixed by
// `prefix`; the remaining `walk_bits` entries are enumerated in Gray-code
// order, so each step flips one sign and updates the objective in O(n).
ShardBest enumerate_shard(const std::vector<std::int64_t>& w, int n, int walk_bits,
                          std::uint64_t prefix, bool balanced_only) {
  std::vector<int> y(static_cast<std::size_t>(n), 1);
  const int prefix_bits = n - 1 - walk_bits;
  for (int b = 0; b < prefix_bits; ++b)
    if ((prefix >> b) & 1u) y[static_cast<std::size_t>(1 + walk_bits + b)] = -1;

  std::vector<std::int64_t> field(static_cast<std::size_t>(n), 0);  // W y
  std::int64_t objective = 0;
  int sum = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) field[i] += w[i * n + j] * y[j];
    objective += y[i] * field[i];
    sum += y[i];
  }

  ShardBest best;
  if (!balanced_only || sum == 0) offer(best, objective, y);
  const std::uint64_t steps = std::uint64_t{1} << walk_bits;
  for (std::uint64_t t = 1; t < steps; ++t) {
    const int k = 1 + std::countr_zero(t);
    const int yk = y[k];
    // W_kk = 0, so flipping y_k changes yᵀWy by -4 y_k (W y)_k.
    objective -= 4 * yk * field[k];
    for (int j = 0; j < n; ++j) field[j] -= 2 * w[j * n + k] * yk;
    y[k] = -yk;
    sum -= 2 * yk;
    if (!balanced_only || sum == 0) offer(best, objective, y);
  }
  return best;
}

}  // namespace

std::int64_t mle_objective(const Matrix& adjacency, const Labels& labels) {
  validate_adjacency(adjacency);
  const Eigen::Index n = adjacency.rows();
  if (n != static_cast<Eigen::Index>(labels.size()))
    throw InvalidInput("label count differs from node count");
  std::int64_t quad = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      if (adjacency(i, j) != 0.0) quad += labels[i] * labels[j];
  const std::int64_t sum = labels.sum();
  return 4 * quad - sum * sum + n;
}

MleResult brute_force_mle(const Matrix& adjacency, const MleOptions& options) {
  validate_adjacency(adjacency);
  const int n = static_cast<int>(adjacency.rows());
  if (n > kMaxBruteForceNodes)
    throw ResourceLimit("brute-force MLE is capped at " + std::to_string(kMaxBruteForceNodes) +
                        " nodes, got " + std::to_string(n));
  if (n < 1) throw InvalidInput("empty graph");

  std::vector<std::int64_t> w(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      w[i * n + j] = i == j ? 0 : (adjacency(i, j) != 0.0 ? 1 : -1);

  const int free_bits = n - 1;
  const int prefix_bits = std::min(free_bits, 4);
  const int walk_bits = free_bits - prefix_bits;
  const std::uint64_t shards = std::uint64_t{1} << prefix_bits;

  std::vector<ShardBest> results(shards);
  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(shards)));
  auto worker = [&](unsigned id) {
    for (std::uint64_t s = id; s < shards; s += threads)
      results[s] = enumerate_shard(w, n, walk_bits, s, options.balanced_only);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker, t);
  worker(0);
  for (auto& t : pool) t.join();

  ShardBest total;
  for (const auto& r : results) {
    if (r.count == 0) continue;
    if (r.objective > total.objective) {
      total = r;
    } else if (r.objective == total.objective) {
      total.count += r.count;
      if (std::lexicographical_compare(r.labels.begin(), r.labels.end(), total.labels.begin(),
                                       total.labels.end()))
        total.labels = r.labels;
    }
  }
  if (total.count == 0) throw InvalidInput("no admissible label vector (odd n with balanced_only?)");

  MleResult out;
  out.best_labels = Labels(std::move(total.labels));
  out.best_objective = total.objective;
  out.num_optima = total.count;
  return out;
}

std::int64_t y_distance(const Labels& y, const Labels& y_star) {
  if (y.size() != y_star.size()) throw InvalidInput("label vectors differ in length");
  const auto n = static_cast<std::int64_t>(y.size());
  std::int64_t overlap = 0;
  for (std::size_t i = 0; i < y.size(); ++i) overlap += y[i] * y_star[i];
  return n * n - overlap * overlap;
}

}  // namespace lsm
