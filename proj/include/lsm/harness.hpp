#pragma once

#include <climits>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lsm/certificate.hpp"
#include "lsm/io.hpp"
#include "lsm/moments.hpp"
#include "lsm/regimes.hpp"
#include "lsm/sdp.hpp"

namespace lsm {

/// Inclusive arithmetic range lo, lo + step, ..., up to hi.
struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;

  std::vector<double> values() const;
  /// Parses "lo:hi:step" or a single value.
  static Grid parse(const std::string& text);
};

struct SweepSpec {
  int n = 300;
  int d = 2;
  Grid mu{0.2, 1.0, 0.2};
  Grid sigma{0.05, 0.45, 0.1};
  int trials_cert = 100;
  int trials_sdp = 10;
  std::uint64_t seed = 0;
  RegimeConstants constants;
  SolverConfig solver;
  /// Cells are distributed over this many workers; 0 = hardware threads.
  unsigned threads = 0;

  void validate() const;
};

struct SweepCell {
  double mu_norm = 0.0;
  double sigma = 0.0;
  GaussianMoments moments;
  RegimeReport regimes;
  int cert_successes = 0;
  int trials_cert = 0;
  int sdp_successes = 0;
  int trials_sdp = 0;
  int sdp_nonconverged = 0;
  /// Instances with a valid certificate whose SDP solve still failed the
  /// entrywise test. Always zero for a sound certificate.
  int consistency_violations = 0;
  double mean_lambda2 = 0.0;
};

/// Seed for a cell, a pure function of the master seed and coordinates.
std::uint64_t cell_seed(std::uint64_t master, double mu_norm, double sigma);

/// Instance t of a cell doubles as certificate trial t and, for
/// t < trials_sdp, SDP trial t.
SweepCell run_cell(const SweepSpec& spec, double mu_norm, double sigma);

/// Every (mu, sigma) cell, sorted by mu then sigma.
std::vector<SweepCell> run_sweep(const SweepSpec& spec);

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells);

struct RegimePoint {
  double mu_norm = 0.0;
  double sigma = 0.0;
  int d = 0;
  RegimeReport report;
};

/// Regime verdicts on every (mu, sigma) point, from closed-form moments.
std::vector<RegimePoint> regime_grid(int n, int d, const Grid& mu, const Grid& sigma,
                                     const RegimeConstants& constants);
void write_regime_csv(std::ostream& out, const std::vector<RegimePoint>& points);

struct ReplicationSpec {
  int n = 5000;
  int d = 2;
  double mu_norm = 1.0;
  std::vector<double> sigmas{0.05, 0.3};
  int trials = 10;
  std::uint64_t seed = 0;
  bool run_sdp = false;
  SolverConfig solver;
};

struct ReplicationRow {
  double sigma = 0.0;
  int trials = 0;
  int positive_lambda2 = 0;  // lambda_2 > eig_tol
  int certified = 0;         // psd and lambda_2 > eig_tol
  std::vector<double> lambda2;
  std::optional<int> sdp_successes;
};

std::vector<ReplicationRow> replicate_large_n(const ReplicationSpec& spec);

/// A real graph restricted to its two largest ground-truth clusters.
struct TwoClusterGraph {
  Matrix adjacency;
  Labels labels;  // larger cluster -> +1
  std::vector<std::int64_t> node_ids;
  std::int64_t cluster_pos = 0;
  std::int64_t cluster_neg = 0;
  int size_pos = 0;
  int size_neg = 0;
  std::vector<std::string> warnings;
};

/// Marks a node that the label file does not mention.
inline constexpr std::int64_t kUnlabeled = INT64_MIN;

struct IngestedGraph {
  io::EdgeList graph;
  /// Cluster id per dense node (kUnlabeled if absent), when a label file
  /// was supplied.
  std::optional<std::vector<std::int64_t>> clusters;
};

/// Edge list plus an optional label file. The label file holds either one
/// token per line (aligned with the dense node order) or "node cluster"
/// pairs; tokens may be +1/-1 or arbitrary integer cluster ids.
IngestedGraph ingest_edge_list(const std::filesystem::path& edges,
                               const std::optional<std::filesystem::path>& labels = std::nullopt);

/// Induced subgraph on the two largest clusters (ties broken by smaller id).
TwoClusterGraph select_two_largest_clusters(const IngestedGraph& graph);

struct RealDataResult {
  int n = 0;
  int size_pos = 0;
  int size_neg = 0;
  /// max(match, 1 - match) over the two global signs.
  double accuracy = 0.0;
  Labels predicted;
  /// Whether sign(Y) was exactly rank one.
  bool signed_rank_one = false;
  SdpSolution solution;
};

/// Solves the SDP, takes the entrywise sign of Y, reads labels from its
/// leading eigenvector and scores them against the ground truth.
RealDataResult score_real(const Matrix& adjacency, const Labels& labels,
                          const SolverConfig& config = {});

/// Fraction of matching labels, maximized over the global sign.
double flip_accuracy(const Labels& predicted, const Labels& truth);

}  // namespace lsm
