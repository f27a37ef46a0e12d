#include "lsm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "lsm/error.hpp"
#include "lsm/linalg.hpp"

namespace lsm {
namespace {

std::uint64_t bits_of(double x) { return std::bit_cast<std::uint64_t>(x); }

// Runs task(i) for i in [0, count) on up to `threads` workers.
template <class Task>
void parallel_for(std::size_t count, unsigned threads, Task task) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

const char* verdict_text(std::optional<bool> v) {
  if (!v) return "na";
  return *v ? "1" : "0";
}

std::int64_t parse_cluster(const std::string& token, const std::filesystem::path& path,
                           std::size_t line) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != token.size())
    throw IngestError(path.string() + ":" + std::to_string(line) + ": '" + token +
                      "' is not an integer label");
  return v;
}

bool skip_line(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#' || line[pos] == '%';
}

}  // namespace

std::vector<double> Grid::values() const {
  if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo)
    throw InvalidParameter("grid needs finite lo <= hi and step > 0");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = lo + static_cast<double>(k) * step;
  return out;
}

Grid Grid::parse(const std::string& text) {
  std::vector<double> parts;
  std::istringstream in(text);
  std::string field;
  while (std::getline(in, field, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw InvalidParameter("bad grid '" + text + "': expected lo:hi:step or a number");
    }
  }
  Grid g;
  if (parts.size() == 1) {
    g = {parts[0], parts[0], 1.0};
  } else if (parts.size() == 3) {
    g = {parts[0], parts[1], parts[2]};
  } else {
    throw InvalidParameter("bad grid '" + text + "': expected lo:hi:step or a number");
  }
  g.values();
  return g;
}

void SweepSpec::validate() const {
  if (trials_cert < 1 || trials_sdp < 1) throw InvalidParameter("trial counts must be >= 1");
  if (mu.values().empty() || sigma.values().empty()) throw InvalidParameter("empty grid");
  ModelParams probe;
  probe.n = n;
  probe.d = d;
  probe.mu_norm = mu.lo;
  probe.sigma = sigma.lo;
  probe.validate();
  solver.validate();
}

std::uint64_t cell_seed(std::uint64_t master, double mu_norm, double sigma) {
  return derive_seed(derive_seed(master, Stream::kCell, bits_of(mu_norm)), Stream::kCell,
                     bits_of(sigma));
}

SweepCell run_cell(const SweepSpec& spec, double mu_norm, double sigma) {
  ModelParams params;
  params.n = spec.n;
  params.d = spec.d;
  params.mu_norm = mu_norm;
  params.sigma = sigma;
  params.validate();

  SweepCell cell;
  cell.mu_norm = mu_norm;
  cell.sigma = sigma;
  cell.moments = closed_form(spec.d, mu_norm, sigma);
  cell.regimes = classify(spec.n, cell.moments.values, spec.constants);
  cell.trials_cert = spec.trials_cert;
  cell.trials_sdp = spec.trials_sdp;

  const std::uint64_t seed = cell_seed(spec.seed, mu_norm, sigma);
  const int instances = std::max(spec.trials_cert, spec.trials_sdp);
  double lambda_sum = 0.0;
  for (int t = 0; t < instances; ++t) {
    const LsmInstance inst = generate(params, derive_seed(seed, Stream::kTrial, t));
    const CertificateReport cert = certify(inst.adjacency, inst.labels);
    if (t < spec.trials_cert) {
      if (cert.certified()) ++cell.cert_successes;
      lambda_sum += cert.lambda_2;
    }
    if (t < spec.trials_sdp) {
      const SdpSolution sol = solve(inst.adjacency, spec.solver);
      if (!sol.converged) ++cell.sdp_nonconverged;
      const bool ok = sol.converged && success_test(sol.Y, inst.labels);
      if (ok) ++cell.sdp_successes;
      if (cert.certified() && !ok) ++cell.consistency_violations;
    }
  }
  cell.mean_lambda2 = lambda_sum / spec.trials_cert;
  return cell;
}

std::vector<SweepCell> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<std::pair<double, double>> coords;
  for (double mu : spec.mu.values())
    for (double sigma : spec.sigma.values()) coords.emplace_back(mu, sigma);
  std::vector<SweepCell> cells(coords.size());
  parallel_for(coords.size(), spec.threads, [&](std::size_t i) {
    cells[i] = run_cell(spec, coords[i].first, coords[i].second);
  });
  std::sort(cells.begin(), cells.end(), [](const SweepCell& a, const SweepCell& b) {
    return std::tie(a.mu_norm, a.sigma) < std::tie(b.mu_norm, b.sigma);
  });
  return cells;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells) {
  out << "# lsm-sweep-csv v1\n"
         "mu_norm,sigma,n,d,p,q,cert_successes,trials_cert,cert_rate,sdp_successes,trials_sdp,"
         "sdp_rate,sdp_nonconverged,consistency_violations,mean_lambda2,impossible,mle,sdp,"
         "regime\n";
  const auto old = out.precision(12);
  for (const auto& c : cells) {
    out << c.mu_norm << ',' << c.sigma << ',' << c.regimes.n << ',' << c.moments.d << ','
        << c.moments.values.p << ',' << c.moments.values.q << ',' << c.cert_successes << ','
        << c.trials_cert << ',' << static_cast<double>(c.cert_successes) / c.trials_cert << ','
        << c.sdp_successes << ',' << c.trials_sdp << ','
        << static_cast<double>(c.sdp_successes) / c.trials_sdp << ',' << c.sdp_nonconverged << ','
        << c.consistency_violations << ',' << c.mean_lambda2 << ','
        << verdict_text(c.regimes.impossible.verdict()) << ','
        << verdict_text(c.regimes.mle.verdict()) << ',' << verdict_text(c.regimes.sdp.verdict())
        << ',' << c.regimes.label() << '\n';
  }
  out.precision(old);
}

std::vector<RegimePoint> regime_grid(int n, int d, const Grid& mu, const Grid& sigma,
                                     const RegimeConstants& constants) {
  std::vector<RegimePoint> out;
  for (double m : mu.values()) {
    for (double s : sigma.values()) {
      RegimePoint pt;
      pt.mu_norm = m;
      pt.sigma = s;
      pt.d = d;
      pt.report = classify(n, closed_form(d, m, s).values, constants);
      out.push_back(std::move(pt));
    }
  }
  return out;
}

void write_regime_csv(std::ostream& out, const std::vector<RegimePoint>& points) {
  out << "# lsm-regime-csv v1\n"
         "mu_norm,sigma,n,d,p,p_prime,q,q_prime,r,s0,s1,"
         "fano_lhs,fano_rhs,impossible,"
         "mle_sep_lhs,mle_sep_rhs,mle_conc_lhs,mle_conc_rhs,mle,"
         "sdp_pre_lhs,sdp_sep_lhs,sdp_sep_rhs,sdp_deg_lhs,sdp_deg_rhs,sdp_adj_lhs,sdp_adj_rhs,sdp,"
         "regime\n";
  const auto old = out.precision(12);
  for (const auto& pt : points) {
    const RegimeReport& r = pt.report;
    out << pt.mu_norm << ',' << pt.sigma << ',' << r.n << ',' << pt.d;
    for (double v : r.moments.to_array()) out << ',' << v;
    out << ',' << r.impossible.fano.lhs << ',' << r.impossible.fano.rhs << ','
        << verdict_text(r.impossible.verdict()) << ',' << r.mle.separation.lhs << ','
        << r.mle.separation.rhs << ',' << r.mle.concentration.lhs << ','
        << r.mle.concentration.rhs << ',' << verdict_text(r.mle.verdict()) << ','
        << r.sdp.precondition.lhs << ',' << r.sdp.separation.lhs << ',' << r.sdp.separation.rhs
        << ',' << r.sdp.degree.lhs << ',' << r.sdp.degree.rhs << ',' << r.sdp.adjacency.lhs << ','
        << r.sdp.adjacency.rhs << ',' << verdict_text(r.sdp.verdict()) << ',' << r.label()
        << '\n';
  }
  out.precision(old);
}

std::vector<ReplicationRow> replicate_large_n(const ReplicationSpec& spec) {
  if (spec.trials < 1) throw InvalidParameter("trials must be >= 1");
  std::vector<ReplicationRow> rows;
  for (double sigma : spec.sigmas) {
    ModelParams params;
    params.n = spec.n;
    params.d = spec.d;
    params.mu_norm = spec.mu_norm;
    params.sigma = sigma;
    params.validate();
    const std::uint64_t seed = cell_seed(spec.seed, spec.mu_norm, sigma);

    ReplicationRow row;
    row.sigma = sigma;
    row.trials = spec.trials;
    if (spec.run_sdp) row.sdp_successes = 0;
    for (int t = 0; t < spec.trials; ++t) {
      LsmInstance inst = generate(params, derive_seed(seed, Stream::kTrial, t));
      inst.latents.resize(0, 0);
      const CertificateReport cert = certify(inst.adjacency, inst.labels);
      row.lambda2.push_back(cert.lambda_2);
      if (cert.lambda_2 > cert.eig_tol) ++row.positive_lambda2;
      if (cert.certified()) ++row.certified;
      if (spec.run_sdp) {
        const SdpSolution sol = solve(inst.adjacency, spec.solver);
        if (sol.converged && success_test(sol.Y, inst.labels)) ++*row.sdp_successes;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

IngestedGraph ingest_edge_list(const std::filesystem::path& edges,
                               const std::optional<std::filesystem::path>& labels) {
  IngestedGraph out;
  if (!labels) {
    out.graph = io::read_edge_list(edges);
    return out;
  }

  std::ifstream in(*labels);
  if (!in) throw IngestError(labels->string() + ": cannot open for reading");
  std::vector<std::int64_t> column;                  // one-column form
  std::map<std::int64_t, std::int64_t> by_node;      // two-column form
  int columns = 0;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (skip_line(line)) continue;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    const int here = static_cast<int>(tokens.size());
    if (here < 1 || here > 2)
      throw IngestError(labels->string() + ":" + std::to_string(lineno) +
                        ": expected 'label' or 'node label'");
    if (columns == 0) columns = here;
    if (here != columns)
      throw IngestError(labels->string() + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(columns) + " fields, got " + std::to_string(here));
    if (columns == 1) {
      column.push_back(parse_cluster(tokens[0], *labels, lineno));
    } else {
      const std::int64_t node = parse_cluster(tokens[0], *labels, lineno);
      if (node < 0)
        throw IngestError(labels->string() + ":" + std::to_string(lineno) + ": negative node id");
      if (!by_node.emplace(node, parse_cluster(tokens[1], *labels, lineno)).second)
        throw IngestError(labels->string() + ":" + std::to_string(lineno) + ": node " +
                          tokens[0] + " labelled twice");
    }
  }

  if (columns == 2) {
    std::vector<std::int64_t> ids;
    for (const auto& [node, cluster] : by_node) ids.push_back(node);
    out.graph = io::read_edge_list(edges, ids);
    std::vector<std::int64_t> clusters(out.graph.node_ids.size(), kUnlabeled);
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      const auto it = by_node.find(out.graph.node_ids[i]);
      if (it != by_node.end()) clusters[i] = it->second;
    }
    const auto missing = std::count(clusters.begin(), clusters.end(), kUnlabeled);
    if (missing > 0)
      out.graph.warnings.push_back(labels->string() + ": " + std::to_string(missing) +
                                   " node(s) have no label");
    out.clusters = std::move(clusters);
  } else {
    out.graph = io::read_edge_list(edges);
    if (column.size() != out.graph.node_ids.size())
      throw IngestError(labels->string() + ": " + std::to_string(column.size()) +
                        " labels for " + std::to_string(out.graph.node_ids.size()) + " nodes");
    out.clusters = std::move(column);
  }
  return out;
}

TwoClusterGraph select_two_largest_clusters(const IngestedGraph& graph) {
  if (!graph.clusters) throw InvalidInput("ground-truth clusters required");
  const auto& clusters = *graph.clusters;
  std::map<std::int64_t, int> sizes;
  for (std::int64_t c : clusters)
    if (c != kUnlabeled) ++sizes[c];
  if (sizes.size() < 2) throw InvalidInput("need at least two clusters");
  std::vector<std::pair<std::int64_t, int>> order(sizes.begin(), sizes.end());
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  TwoClusterGraph out;
  out.cluster_pos = order[0].first;
  out.cluster_neg = order[1].first;
  out.size_pos = order[0].second;
  out.size_neg = order[1].second;
  out.warnings = graph.graph.warnings;

  std::vector<int> keep;
  std::vector<int> labels;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (clusters[i] == out.cluster_pos || clusters[i] == out.cluster_neg) {
      keep.push_back(static_cast<int>(i));
      labels.push_back(clusters[i] == out.cluster_pos ? 1 : -1);
      out.node_ids.push_back(graph.graph.node_ids[i]);
    }
  }
  std::vector<int> position(clusters.size(), -1);
  for (std::size_t k = 0; k < keep.size(); ++k) position[keep[k]] = static_cast<int>(k);
  const auto m = static_cast<Eigen::Index>(keep.size());
  out.adjacency = Matrix::Zero(m, m);
  for (const auto& [i, j] : graph.graph.edges) {
    if (position[i] < 0 || position[j] < 0) continue;
    out.adjacency(position[i], position[j]) = 1.0;
    out.adjacency(position[j], position[i]) = 1.0;
  }
  out.labels = Labels(std::move(labels));
  return out;
}

double flip_accuracy(const Labels& predicted, const Labels& truth) {
  if (predicted.size() != truth.size() || truth.size() == 0)
    throw InvalidInput("label vectors differ in length or are empty");
  std::size_t match = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) match += predicted[i] == truth[i];
  const double frac = static_cast<double>(match) / static_cast<double>(truth.size());
  return std::max(frac, 1.0 - frac);
}

RealDataResult score_real(const Matrix& adjacency, const Labels& labels,
                          const SolverConfig& config) {
  if (static_cast<Eigen::Index>(labels.size()) != adjacency.rows())
    throw InvalidInput("label count differs from node count");
  RealDataResult out;
  out.n = static_cast<int>(labels.size());
  for (int v : labels.values()) (v > 0 ? out.size_pos : out.size_neg)++;
  out.solution = solve(adjacency, config);

  const Matrix signed_y = out.solution.Y.unaryExpr([](double v) { return v < 0.0 ? -1.0 : 1.0; });
  out.predicted = round_labels(signed_y);
  out.signed_rank_one = (signed_y - out.predicted.outer()).cwiseAbs().maxCoeff() == 0.0;
  out.accuracy = flip_accuracy(out.predicted, labels);
  return out;
}

}  // namespace lsm
