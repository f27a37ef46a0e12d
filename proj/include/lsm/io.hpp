#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lsm/model.hpp"

namespace lsm::io {

namespace fs = std::filesystem;

/// Undirected graph read from a whitespace-separated edge list.
struct EdgeList {
  /// Original id of each dense node index, ascending.
  std::vector<std::int64_t> node_ids;
  /// Unique pairs (i < j) in dense indices.
  std::vector<std::pair<int, int>> edges;
  /// Non-fatal findings (dropped self-loops, duplicates), with line numbers.
  std::vector<std::string> warnings;

  int num_nodes() const { return static_cast<int>(node_ids.size()); }
  Matrix adjacency() const;
};

/// Reads "u v" pairs, one per line; '#' and '%' start comment lines.
/// Ids are remapped densely in ascending order, duplicates collapsed,
/// self-loops dropped. A "# nodes N" header declares ids 0..N-1 as the node
/// set, so isolated nodes survive a round trip. Extra ids (e.g. from a
/// label file) can be merged in through `extra_ids`.
EdgeList read_edge_list(const fs::path& path, const std::vector<std::int64_t>& extra_ids = {});

/// Writes "# nodes N" followed by "i j" (0-indexed, i < j) per edge.
void write_edge_list(const fs::path& path, const Matrix& adjacency);

/// One +1/-1 per line.
Labels read_labels(const fs::path& path);
void write_labels(const fs::path& path, const Labels& labels);

/// CSV with d columns and a header row x0,...,x{d-1}.
Matrix read_latents_csv(const fs::path& path);
void write_latents_csv(const fs::path& path, const Matrix& latents);

/// Directory layout: header.json (params + seed), edges.txt, labels.txt,
/// latents.csv.
void write_instance(const fs::path& dir, const LsmInstance& instance);
LsmInstance read_instance(const fs::path& dir);

}  // namespace lsm::io
