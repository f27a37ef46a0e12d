// Command-line front end: instance generation, moments, regime checks,
// SDP solving, certificates, brute-force MLE and experiment sweeps.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lsm/certificate.hpp"
#include "lsm/error.hpp"
#include "lsm/harness.hpp"
#include "lsm/io.hpp"
#include "lsm/mle.hpp"
#include "lsm/moments.hpp"
#include "lsm/regimes.hpp"
#include "lsm/sdp.hpp"

using nlohmann::json;

namespace {

struct ModelOpts {
  int n = 300;
  int d = 2;
  double mu = 1.0;
  double sigma = 0.3;
  std::uint64_t seed = 0;
  std::string kernel = "sqexp";

  lsm::ModelParams params() const {
    lsm::ModelParams p;
    p.n = n;
    p.d = d;
    p.mu_norm = mu;
    p.sigma = sigma;
    p.kernel = lsm::Kernel::by_name(kernel);
    p.validate();
    return p;
  }
};

struct ConstOpts {
  double c0 = 1.0;
  double c1 = 500.0;
  double c2 = 500.0;
  double c0_mle = 13.0;
  double c1_mle = 500.0;

  lsm::RegimeConstants get() const { return {c0_mle, c1_mle, c0, c1, c2}; }
};

struct SolverOpts {
  std::string method = "ipm";
  int max_iters = 5000;
  double tol = 1e-6;

  lsm::SolverConfig get() const {
    lsm::SolverConfig c;
    if (method == "ipm") {
      c.method = lsm::SolverMethod::kInteriorPoint;
    } else if (method == "admm") {
      c.method = lsm::SolverMethod::kOperatorSplitting;
    } else {
      throw lsm::InvalidParameter("unknown method '" + method + "' (ipm or admm)");
    }
    c.max_iters = max_iters;
    c.feas_tol = tol;
    c.validate();
    return c;
  }
};

// Where a graph comes from: an edge list, a saved instance, or a fresh draw.
struct InputOpts {
  std::string edges;
  std::string labels;
  std::string instance;
};

struct Graph {
  lsm::Matrix adjacency;
  std::optional<lsm::Labels> labels;
  std::optional<lsm::LsmInstance> instance;
};

Graph load_graph(const InputOpts& in, const ModelOpts& model) {
  Graph g;
  if (!in.instance.empty()) {
    g.instance = lsm::io::read_instance(in.instance);
  } else if (!in.edges.empty()) {
    lsm::io::EdgeList edges = lsm::io::read_edge_list(in.edges);
    for (const auto& w : edges.warnings) std::cerr << "warning: " << w << '\n';
    g.adjacency = edges.adjacency();
    if (!in.labels.empty()) {
      g.labels = lsm::io::read_labels(in.labels);
      if (static_cast<Eigen::Index>(g.labels->size()) != g.adjacency.rows())
        throw lsm::InvalidInput(in.labels + ": " + std::to_string(g.labels->size()) +
                                " labels for " + std::to_string(g.adjacency.rows()) + " nodes");
    }
    return g;
  } else {
    g.instance = lsm::generate(model.params(), model.seed);
  }
  g.adjacency = g.instance->adjacency;
  g.labels = g.instance->labels;
  return g;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw lsm::IngestError(path + ": cannot open for writing");
  out << text;
}

void emit_json(const std::string& path, const json& j) { emit(path, j.dump(2) + "\n"); }

json to_json(const lsm::Moments& m) {
  json j;
  const auto values = m.to_array();
  for (std::size_t k = 0; k < values.size(); ++k) j[std::string(lsm::Moments::kNames[k])] = values[k];
  return j;
}

json to_json(const lsm::Condition& c) {
  return {{"lhs", c.lhs},
          {"rhs", c.rhs},
          {"relation", c.relation == lsm::Relation::kLessEqual ? "<=" : ">="},
          {"holds", c.holds}};
}

json to_json(const lsm::RegimeReport& r) {
  json sdp_verdict = nullptr;
  if (auto v = r.sdp.verdict()) sdp_verdict = *v;
  return {
      {"n", r.n},
      {"moments", to_json(r.moments)},
      {"label", r.label()},
      {"impossible",
       {{"applicable", r.impossible.applicable},
        {"fano", to_json(r.impossible.fano)},
        {"verdict", r.impossible.verdict()}}},
      {"mle",
       {{"c0", r.mle.c0},
        {"c1", r.mle.c1},
        {"separation", to_json(r.mle.separation)},
        {"concentration", to_json(r.mle.concentration)},
        {"success_bound", r.mle.success_bound},
        {"verdict", r.mle.verdict()}}},
      {"sdp",
       {{"c0", r.sdp.c0},
        {"c1", r.sdp.c1},
        {"c2", r.sdp.c2},
        {"precondition", to_json(r.sdp.precondition)},
        {"separation", to_json(r.sdp.separation)},
        {"degree", to_json(r.sdp.degree)},
        {"adjacency", to_json(r.sdp.adjacency)},
        {"success_bound", r.sdp.success_bound},
        {"verdict", sdp_verdict}}},
  };
}

json solution_json(const lsm::SdpSolution& s) {
  return {{"objective", s.objective},       {"iterations", s.iterations},
          {"converged", s.converged},       {"primal_residual", s.primal_residual},
          {"dual_residual", s.dual_residual}, {"exact", s.exact},
          {"rounded_labels", s.rounded_labels.values()}};
}

void add_model_flags(CLI::App* cmd, ModelOpts& m) {
  cmd->add_option("--n", m.n, "Number of nodes (even)")->capture_default_str();
  cmd->add_option("--d", m.d, "Latent dimension")->capture_default_str();
  cmd->add_option("--mu", m.mu, "Norm of the class mean")->capture_default_str();
  cmd->add_option("--sigma", m.sigma, "Latent standard deviation")->capture_default_str();
  cmd->add_option("--seed", m.seed, "Master seed")->capture_default_str();
  cmd->add_option("--kernel", m.kernel, "Kernel: sqexp or invquad")->capture_default_str();
}

void add_const_flags(CLI::App* cmd, ConstOpts& c) {
  cmd->add_option("--c0", c.c0, "SDP constant c0")->capture_default_str();
  cmd->add_option("--c1", c.c1, "SDP constant c1")->capture_default_str();
  cmd->add_option("--c2", c.c2, "SDP constant c2")->capture_default_str();
  cmd->add_option("--c0-mle", c.c0_mle, "MLE constant c0 (> 12.5)")->capture_default_str();
  cmd->add_option("--c1-mle", c.c1_mle, "MLE constant c1")->capture_default_str();
}

void add_solver_flags(CLI::App* cmd, SolverOpts& s) {
  cmd->add_option("--method", s.method, "ipm or admm")->capture_default_str();
  cmd->add_option("--max-iters", s.max_iters, "Iteration cap")->capture_default_str();
  cmd->add_option("--tol", s.tol, "Residual tolerance")->capture_default_str();
}

void add_input_flags(CLI::App* cmd, InputOpts& in) {
  cmd->add_option("--edges", in.edges, "Edge list file");
  cmd->add_option("--labels", in.labels, "Ground-truth labels (+1/-1 per line)");
  cmd->add_option("--instance", in.instance, "Instance directory written by gen");
}

// "--grid MU,SIGMA" where each part is lo:hi:step or a single value.
void resolve_grid(const std::string& grid, std::string& mu, std::string& sigma) {
  if (grid.empty()) return;
  const auto comma = grid.find(',');
  if (comma == std::string::npos)
    throw lsm::InvalidParameter("--grid expects MU_RANGE,SIGMA_RANGE");
  mu = grid.substr(0, comma);
  sigma = grid.substr(comma + 1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact recovery of two communities in the latent space model"};
  app.require_subcommand(1);

  ModelOpts model;
  ConstOpts consts;
  SolverOpts solver;
  InputOpts input;
  std::string out;

  // gen
  auto* gen = app.add_subcommand("gen", "Sample an instance and write it to a directory");
  add_model_flags(gen, model);
  gen->add_option("--out", out, "Output directory")->required();

  // moments
  std::int64_t mc_samples = 0;
  auto* moments = app.add_subcommand("moments", "Closed-form (and optional Monte-Carlo) moments");
  add_model_flags(moments, model);
  moments->add_option("--samples,--mc", mc_samples, "Monte-Carlo samples (0 = skip)");
  moments->add_option("--out", out, "JSON output file (default stdout)");

  // regime
  auto* regime = app.add_subcommand("regime", "Evaluate the three regime conditions");
  add_model_flags(regime, model);
  add_const_flags(regime, consts);
  regime->add_option("--out", out, "JSON output file");

  // regime-grid
  std::string mu_range = "0.2:1:0.2", sigma_range = "0.05:0.45:0.1", grid;
  auto* regime_grid = app.add_subcommand("regime-grid", "Regime verdicts over a (mu, sigma) grid");
  regime_grid->add_option("--n", model.n)->capture_default_str();
  regime_grid->add_option("--d", model.d)->capture_default_str();
  regime_grid->add_option("--mu", mu_range, "lo:hi:step")->capture_default_str();
  regime_grid->add_option("--sigma", sigma_range, "lo:hi:step")->capture_default_str();
  regime_grid->add_option("--grid", grid, "MU_RANGE,SIGMA_RANGE (overrides --mu/--sigma)");
  add_const_flags(regime_grid, consts);
  regime_grid->add_option("--out", out, "CSV output file");

  // solve
  std::string labels_out;
  auto* solve = app.add_subcommand("solve", "Solve the SDP on a graph");
  add_model_flags(solve, model);
  add_input_flags(solve, input);
  add_solver_flags(solve, solver);
  solve->add_option("--labels-out", labels_out, "Write rounded labels here");
  solve->add_option("--out", out, "JSON output file");

  // certify
  double eig_tol = 0.0;
  auto* certify = app.add_subcommand("certify", "Dual certificate for the ground truth");
  add_model_flags(certify, model);
  add_input_flags(certify, input);
  certify->add_option("--eig-tol", eig_tol, "Eigenvalue tolerance (0 = 1e-8 n)");
  certify->add_option("--out", out, "JSON output file");

  // mle
  bool balanced_only = false;
  auto* mle = app.add_subcommand("mle", "Brute-force maximum likelihood (n <= 24)");
  add_model_flags(mle, model);
  add_input_flags(mle, input);
  mle->add_flag("--balanced-only", balanced_only, "Search balanced vectors only");
  mle->add_option("--out", out, "JSON output file");

  // sweep
  lsm::SweepSpec sweep_spec;
  auto* sweep = app.add_subcommand("sweep", "Certificate and SDP success rates over a grid");
  sweep->add_option("--n", sweep_spec.n)->capture_default_str();
  sweep->add_option("--d", sweep_spec.d)->capture_default_str();
  sweep->add_option("--mu", mu_range, "lo:hi:step")->capture_default_str();
  sweep->add_option("--sigma", sigma_range, "lo:hi:step")->capture_default_str();
  sweep->add_option("--grid", grid, "MU_RANGE,SIGMA_RANGE (overrides --mu/--sigma)");
  sweep->add_option("--trials-cert", sweep_spec.trials_cert)->capture_default_str();
  sweep->add_option("--trials-sdp", sweep_spec.trials_sdp)->capture_default_str();
  sweep->add_option("--seed", sweep_spec.seed)->capture_default_str();
  sweep->add_option("--threads", sweep_spec.threads, "Workers (0 = all cores)");
  add_const_flags(sweep, consts);
  add_solver_flags(sweep, solver);
  sweep->add_option("--out", out, "CSV output file");

  // replicate-large-n
  lsm::ReplicationSpec appd;
  auto* replicate = app.add_subcommand("replicate-large-n",
                                       "Certificate counts at n = 5000 for two noise levels");
  replicate->alias("replicate-appendix-d");
  replicate->add_option("--n", appd.n)->capture_default_str();
  replicate->add_option("--d", appd.d)->capture_default_str();
  replicate->add_option("--mu", appd.mu_norm)->capture_default_str();
  replicate->add_option("--sigmas", appd.sigmas)->delimiter(',')->capture_default_str();
  replicate->add_option("--trials", appd.trials)->capture_default_str();
  replicate->add_option("--seed", appd.seed)->capture_default_str();
  replicate->add_flag("--sdp", appd.run_sdp, "Also solve the SDP on each instance");
  add_solver_flags(replicate, solver);
  replicate->add_option("--out", out, "JSON output file");

  // score-real
  auto* score = app.add_subcommand("score-real",
                                   "Recover the two largest clusters of a labelled graph");
  score->add_option("--edges", input.edges, "Edge list")->required();
  score->add_option("--labels", input.labels,
                    "Cluster per node: one token per line, or 'node cluster' pairs")
      ->required();
  add_solver_flags(score, solver);
  score->add_option("--out", out, "JSON output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const lsm::LsmInstance inst = lsm::generate(model.params(), model.seed);
      lsm::io::write_instance(out, inst);
      emit_json("", {{"out", out},
                     {"n", inst.params.n},
                     {"edges", static_cast<std::int64_t>(inst.adjacency.sum() / 2)},
                     {"seed", inst.seed}});
    } else if (*moments) {
      const lsm::ModelParams params = model.params();
      json j = {{"d", model.d}, {"mu_norm", model.mu}, {"sigma", model.sigma}};
      if (params.kernel.has_closed_form_moments())
        j["closed_form"] = to_json(lsm::closed_form(model.d, model.mu, model.sigma).values);
      if (mc_samples > 0) {
        const auto mc = lsm::monte_carlo(params, mc_samples, model.seed);
        j["monte_carlo"] = {{"estimate", to_json(mc.estimate)},
                            {"standard_error", to_json(mc.standard_error)},
                            {"samples", mc.samples}};
      }
      emit_json(out, j);
    } else if (*regime) {
      const lsm::ModelParams params = model.params();
      const auto m = lsm::closed_form(params.d, params.mu_norm, params.sigma);
      emit_json(out, to_json(lsm::classify(params.n, m.values, consts.get())));
    } else if (*regime_grid) {
      resolve_grid(grid, mu_range, sigma_range);
      const auto pts = lsm::regime_grid(model.n, model.d, lsm::Grid::parse(mu_range),
                                        lsm::Grid::parse(sigma_range), consts.get());
      std::ostringstream csv;
      lsm::write_regime_csv(csv, pts);
      emit(out, csv.str());
    } else if (*solve) {
      const Graph g = load_graph(input, model);
      const lsm::SdpSolution sol = lsm::solve(g.adjacency, solver.get());
      json j = solution_json(sol);
      j["n"] = g.adjacency.rows();
      if (g.labels) {
        j["accuracy"] = lsm::flip_accuracy(sol.rounded_labels, *g.labels);
        j["success"] = lsm::success_test(sol.Y, *g.labels);
      }
      if (!labels_out.empty()) lsm::io::write_labels(labels_out, sol.rounded_labels);
      emit_json(out, j);
    } else if (*certify) {
      const Graph g = load_graph(input, model);
      if (!g.labels) throw lsm::InvalidInput("certify needs ground-truth labels");
      const lsm::CertificateReport rep = lsm::certify(g.adjacency, *g.labels, eig_tol);
      json j = {{"n", g.adjacency.rows()},
                {"lambda_min", rep.lambda_min},
                {"lambda_2", rep.lambda_2},
                {"eig_tol", rep.eig_tol},
                {"psd", rep.psd},
                {"unique", rep.unique},
                {"certified", rep.certified()},
                {"primal_value", rep.primal_value},
                {"dual_value", rep.dual_value},
                {"gap_identity_ok", rep.gap_identity_ok},
                {"null_residual", rep.null_residual},
                {"margins", nullptr}};
      if (g.instance && g.instance->params.kernel.has_closed_form_moments()) {
        const auto& p = g.instance->params;
        const auto m = lsm::closed_form(p.d, p.mu_norm, p.sigma);
        if (auto margins = lsm::concentration_margins(g.adjacency, g.instance->latents, p.kernel,
                                                      *g.labels, m.values)) {
          j["margins"] = {{"base", margins->base},
                          {"values", margins->margins},
                          {"all_positive", margins->all_positive()}};
        }
      }
      emit_json(out, j);
    } else if (*mle) {
      const Graph g = load_graph(input, model);
      lsm::MleOptions opts;
      opts.balanced_only = balanced_only;
      const lsm::MleResult res = lsm::brute_force_mle(g.adjacency, opts);
      json j = {{"n", g.adjacency.rows()},
                {"best_labels", res.best_labels.values()},
                {"best_objective", res.best_objective},
                {"num_optima", res.num_optima},
                {"unique", res.is_unique()}};
      if (g.labels) {
        j["truth_objective"] = lsm::mle_objective(g.adjacency, *g.labels);
        j["y_distance"] = lsm::y_distance(res.best_labels, *g.labels);
      }
      emit_json(out, j);
    } else if (*sweep) {
      resolve_grid(grid, mu_range, sigma_range);
      sweep_spec.mu = lsm::Grid::parse(mu_range);
      sweep_spec.sigma = lsm::Grid::parse(sigma_range);
      sweep_spec.constants = consts.get();
      sweep_spec.solver = solver.get();
      const auto cells = lsm::run_sweep(sweep_spec);
      for (const auto& c : cells)
        if (c.sdp_nonconverged > 0)
          std::cerr << "note: mu=" << c.mu_norm << " sigma=" << c.sigma << ": "
                    << c.sdp_nonconverged << " SDP solve(s) hit the iteration cap\n";
      std::ostringstream csv;
      lsm::write_sweep_csv(csv, cells);
      emit(out, csv.str());
    } else if (*replicate) {
      appd.solver = solver.get();
      json rows = json::array();
      for (const auto& r : lsm::replicate_large_n(appd)) {
        json row = {{"sigma", r.sigma},
                    {"trials", r.trials},
                    {"positive_lambda2", r.positive_lambda2},
                    {"certified", r.certified},
                    {"lambda2", r.lambda2}};
        if (r.sdp_successes) row["sdp_successes"] = *r.sdp_successes;
        rows.push_back(row);
      }
      emit_json(out, {{"n", appd.n}, {"d", appd.d}, {"mu_norm", appd.mu_norm},
                      {"seed", appd.seed}, {"rows", rows}});
    } else if (*score) {
      const auto ingested = lsm::ingest_edge_list(input.edges, input.labels);
      const auto two = lsm::select_two_largest_clusters(ingested);
      for (const auto& w : two.warnings) std::cerr << "warning: " << w << '\n';
      const auto res = lsm::score_real(two.adjacency, two.labels, solver.get());
      json j = {{"n", res.n},
                {"cluster_pos", two.cluster_pos},
                {"cluster_neg", two.cluster_neg},
                {"size_pos", res.size_pos},
                {"size_neg", res.size_neg},
                {"accuracy", res.accuracy},
                {"signed_rank_one", res.signed_rank_one},
                {"solver", solution_json(res.solution)}};
      j["solver"].erase("rounded_labels");
      j["predicted"] = res.predicted.values();
      if (!res.signed_rank_one) std::cerr << "note: sign(Y) is not rank one\n";
      emit_json(out, j);
    }
  } catch (const lsm::ResourceLimit& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const lsm::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const lsm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
