#include "lsm/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lsm/error.hpp"

namespace lsm::io {
namespace {

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError(path.string() + ": cannot open for reading");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IngestError(path.string() + ": cannot open for writing");
  return out;
}

[[noreturn]] void fail(const fs::path& path, std::size_t line, const std::string& what) {
  throw IngestError(path.string() + ":" + std::to_string(line) + ": " + what);
}

bool is_comment(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#' || line[pos] == '%';
}

std::int64_t parse_id(const std::string& token, const fs::path& path, std::size_t line) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(token, &used);
  } catch (const std::exception&) {
    fail(path, line, "'" + token + "' is not an integer node id");
  }
  if (used != token.size()) fail(path, line, "'" + token + "' is not an integer node id");
  if (v < 0) fail(path, line, "negative node id " + token);
  return v;
}

}  // namespace

Matrix EdgeList::adjacency() const {
  const int n = num_nodes();
  Matrix a = Matrix::Zero(n, n);
  for (const auto& [i, j] : edges) {
    a(i, j) = 1.0;
    a(j, i) = 1.0;
  }
  return a;
}

EdgeList read_edge_list(const fs::path& path, const std::vector<std::int64_t>& extra_ids) {
  std::ifstream in = open_in(path);
  std::optional<std::int64_t> declared_nodes;
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  std::vector<std::size_t> raw_lines;
  EdgeList out;

  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (is_comment(line)) {
      std::istringstream header(line);
      std::string hash, key;
      std::int64_t count = 0;
      if (header >> hash >> key >> count && hash == "#" && key == "nodes") declared_nodes = count;
      continue;
    }
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b)) fail(path, lineno, "expected two node ids");
    if (fields >> extra) fail(path, lineno, "unexpected third field '" + extra + "'");
    const std::int64_t u = parse_id(a, path, lineno);
    const std::int64_t v = parse_id(b, path, lineno);
    if (u == v) {
      out.warnings.push_back(path.string() + ":" + std::to_string(lineno) + ": self-loop on node " +
                             std::to_string(u) + " dropped");
      continue;
    }
    if (declared_nodes && (u >= *declared_nodes || v >= *declared_nodes))
      fail(path, lineno, "node id exceeds declared node count " + std::to_string(*declared_nodes));
    raw.emplace_back(u, v);
    raw_lines.push_back(lineno);
  }

  std::set<std::int64_t> ids(extra_ids.begin(), extra_ids.end());
  if (declared_nodes) {
    for (std::int64_t i = 0; i < *declared_nodes; ++i) ids.insert(i);
  }
  for (const auto& [u, v] : raw) {
    ids.insert(u);
    ids.insert(v);
  }
  out.node_ids.assign(ids.begin(), ids.end());
  std::map<std::int64_t, int> dense;
  for (std::size_t k = 0; k < out.node_ids.size(); ++k) dense[out.node_ids[k]] = static_cast<int>(k);

  std::set<std::pair<int, int>> seen;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    int i = dense[raw[k].first], j = dense[raw[k].second];
    if (i > j) std::swap(i, j);
    if (!seen.insert({i, j}).second) {
      out.warnings.push_back(path.string() + ":" + std::to_string(raw_lines[k]) +
                             ": duplicate edge collapsed");
    }
  }
  out.edges.assign(seen.begin(), seen.end());
  return out;
}

void write_edge_list(const fs::path& path, const Matrix& adjacency) {
  validate_adjacency(adjacency);
  std::ofstream out = open_out(path);
  out << "# nodes " << adjacency.rows() << "\n";
  for (Eigen::Index i = 0; i < adjacency.rows(); ++i)
    for (Eigen::Index j = i + 1; j < adjacency.cols(); ++j)
      if (adjacency(i, j) != 0.0) out << i << ' ' << j << '\n';
}

Labels read_labels(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::vector<int> values;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (is_comment(line)) continue;
    std::istringstream fields(line);
    std::string token;
    fields >> token;
    if (token == "1" || token == "+1")
      values.push_back(1);
    else if (token == "-1")
      values.push_back(-1);
    else
      fail(path, lineno, "expected +1 or -1, got '" + token + "'");
  }
  return Labels(std::move(values));
}

void write_labels(const fs::path& path, const Labels& labels) {
  std::ofstream out = open_out(path);
  for (int v : labels.values()) out << v << '\n';
}

Matrix read_latents_csv(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (is_comment(line)) continue;
    if (lineno == 1 && line.rfind("x0", 0) == 0) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(path, lineno, "'" + cell + "' is not a number");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      fail(path, lineno, "row has " + std::to_string(row.size()) + " columns, expected " +
                             std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = rows.empty() ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.front().size());
  Matrix x(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < d; ++k) x(i, k) = rows[i][k];
  return x;
}

void write_latents_csv(const fs::path& path, const Matrix& latents) {
  std::ofstream out = open_out(path);
  for (Eigen::Index k = 0; k < latents.cols(); ++k) out << (k ? "," : "") << 'x' << k;
  out << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < latents.rows(); ++i) {
    for (Eigen::Index k = 0; k < latents.cols(); ++k) out << (k ? "," : "") << latents(i, k);
    out << '\n';
  }
}

void write_instance(const fs::path& dir, const LsmInstance& instance) {
  fs::create_directories(dir);
  nlohmann::json header = {
      {"format", "lsm-instance/1"},
      {"n", instance.params.n},
      {"d", instance.params.d},
      {"mu_norm", instance.params.mu_norm},
      {"sigma", instance.params.sigma},
      {"kernel", instance.params.kernel.name()},
      {"seed", instance.seed},
  };
  std::ofstream(dir / "header.json") << header.dump(2) << '\n';
  write_edge_list(dir / "edges.txt", instance.adjacency);
  write_labels(dir / "labels.txt", instance.labels);
  write_latents_csv(dir / "latents.csv", instance.latents);
}

LsmInstance read_instance(const fs::path& dir) {
  std::ifstream in = open_in(dir / "header.json");
  nlohmann::json header;
  try {
    in >> header;
  } catch (const nlohmann::json::exception& e) {
    throw IngestError((dir / "header.json").string() + ": " + e.what());
  }
  LsmInstance inst;
  inst.params.n = header.at("n").get<int>();
  inst.params.d = header.at("d").get<int>();
  inst.params.mu_norm = header.at("mu_norm").get<double>();
  inst.params.sigma = header.at("sigma").get<double>();
  inst.params.kernel = Kernel::by_name(header.value("kernel", std::string("sqexp")));
  inst.seed = header.at("seed").get<std::uint64_t>();
  inst.adjacency = read_edge_list(dir / "edges.txt").adjacency();
  inst.labels = read_labels(dir / "labels.txt");
  inst.latents = read_latents_csv(dir / "latents.csv");
  if (inst.adjacency.rows() != inst.params.n || static_cast<int>(inst.labels.size()) != inst.params.n)
    throw IngestError(dir.string() + ": node count disagrees with header.json");
  return inst;
}

}  // namespace lsm::io
