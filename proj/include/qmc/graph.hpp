#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qmc {

struct Edge {
  int i = 0;
  int j = 0;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Weighted undirected interaction graph.
///
/// Edges are stored once, with i < j, sorted lexicographically. Weights are
/// nonnegative; self-loops and duplicate pairs are rejected at construction.
class Graph {
 public:
  Graph() = default;
  Graph(int n, std::vector<Edge> edges);

  int num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_[e]; }

  /// Position of the edge {i, j} in edges(), in either orientation.
  std::optional<std::size_t> find_edge(int i, int j) const;

  double total_weight() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

struct Neighbor {
  int vertex;
  double weight;
  std::size_t edge;  // position in Graph::edges()
};

/// Per-vertex adjacency, sorted by neighbor id. Zero-weight edges are kept.
class NeighborIndex {
 public:
  explicit NeighborIndex(const Graph& g);

  int num_vertices() const { return static_cast<int>(adjacency_.size()); }
  std::span<const Neighbor> neighbors(int v) const { return adjacency_[v]; }
  int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }
  bool adjacent(int u, int v) const;

 private:
  std::vector<std::vector<Neighbor>> adjacency_;
};

enum class GraphFormat { EdgeList, Json };

/// Edge list: optional first line "n", then "i j [w]" per line, '#' starts a
/// comment. JSON: {"n": int, "edges": [[i, j, w], ...]}. Throws InputError.
Graph parse_graph(std::string_view text, GraphFormat format);
std::string serialize_graph(const Graph& g, GraphFormat format);

/// Reads a file; ".json" selects the JSON format, anything else the edge list.
Graph read_graph_file(const std::string& path);

enum class GraphKind { Complete, Cycle, Star, Path, ErdosRenyi };

struct GeneratorSpec {
  GraphKind kind = GraphKind::Complete;
  int n = 0;  // vertex count; for Star this is the leaf count d (n = d + 1)
  double p = 0.5;
  std::optional<std::pair<double, double>> weight_range;
  std::uint64_t seed = 0;
};

/// Parses "kind:key=value,..." e.g. "complete:n=4", "star:d=3",
/// "erdos_renyi:n=8,p=0.4,seed=3", "cycle:n=5,wmin=0.5,wmax=2".
GeneratorSpec parse_generator_spec(std::string_view text);
std::string to_string(const GeneratorSpec& spec);

/// Deterministic in (kind, params, seed). Unit weights unless a weight range
/// is given.
Graph generate(const GeneratorSpec& spec);

}  // namespace qmc
