#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace tfpack {

using Vertex = std::uint32_t;

/// Undirected edge stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable simple undirected graph on {0..n-1}.
///
/// Edges are kept sorted, so an edge's position in edges() is a stable
/// "rank" that other modules use as a dense edge id. Neighbor lists are
/// sorted; graphs with at most `bitset_threshold` vertices also carry one
/// adjacency bitset row per vertex for fast co-degree counts.
class Graph {
 public:
  static constexpr std::size_t kDefaultBitsetThreshold = 4096;

  Graph() = default;

  /// Throws InvalidArgument on self-loops, duplicates, or ids >= n.
  Graph(std::size_t n, std::vector<Edge> edges,
        std::size_t bitset_threshold = kDefaultBitsetThreshold);

  static Graph complete(std::size_t n);
  static Graph complete_bipartite(std::size_t nu);

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(Vertex a, Vertex b) const;

  /// Position of {a,b} in edges(), if present.
  std::optional<std::size_t> edge_rank(Vertex a, Vertex b) const;

  /// Number of common neighbors of a and b.
  std::size_t codegree(Vertex a, Vertex b) const;

  bool has_bitsets() const { return !bits_.empty(); }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> neighbors_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// G(n,p): every pair is an edge independently with probability p. Row u
/// draws from stream (seed, "gnp", u).
Graph generate_gnp(std::size_t n, double p, std::uint64_t seed);

/// B(nu,nu,p) on sides {0..nu-1} and {nu..2nu-1}.
Graph generate_bipartite(std::size_t nu, double p, std::uint64_t seed);

struct RegularityReport {
  double epsilon = 0;
  double p = 0;
  bool degree_ok = false;
  bool codegree_ok = false;
  std::size_t min_degree = 0;
  std::size_t max_codegree = 0;
  Vertex worst_degree_vertex = 0;
  std::pair<Vertex, Vertex> worst_codegree_pair{0, 0};

  bool regular() const { return degree_ok && codegree_ok; }
};

/// Checks d(v) >= (1-eps)np for all v and d(u,v) <= (1+eps)np^2 for all
/// pairs u != v. Requires 0 < eps < 1 and 0 <= p <= 1.
RegularityReport certify_regular(const Graph& g, double epsilon, double p);

/// Edge-list text: "n m" then m lines "u v" with u < v.
Graph read_edge_list(std::istream& in);
Graph read_edge_list(const std::filesystem::path& path);
void write_edge_list(const Graph& g, std::ostream& out);
void write_edge_list(const Graph& g, const std::filesystem::path& path);

}  // namespace tfpack
