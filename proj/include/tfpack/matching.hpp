#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "tfpack/graph.hpp"

namespace tfpack {

/// Balanced bipartite graph in side-local coordinates: A = {0..nu-1},
/// B = {0..nu-1}, adj[a] = sorted B-neighbors of a.
struct BipartitePair {
  std::size_t nu = 0;
  std::vector<std::vector<std::uint32_t>> adj;

  BipartitePair() = default;
  explicit BipartitePair(std::size_t side) : nu(side), adj(side) {}

  /// Throws InvalidArgument if the sides differ in size.
  BipartitePair(std::size_t side_a, std::size_t side_b,
                const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);

  /// Reads a Graph whose sides are {0..nu-1} and {nu..2nu-1}. Throws if
  /// g.n != 2nu or an edge lies within a side.
  static BipartitePair from_graph(const Graph& g, std::size_t nu);

  std::size_t num_edges() const;
};

/// Edge-disjoint perfect matchings extracted from one pair.
/// matchings[k][a] is the B-vertex matched to a in the k-th matching.
struct MatchingFamily {
  std::size_t nu = 0;
  std::vector<std::vector<std::uint32_t>> matchings;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> residual;

  std::size_t size() const { return matchings.size(); }
};

/// Maximum bipartite matching (Hopcroft-Karp). mate_of_a[a] is the matched
/// B-vertex or kUnmatched. Visit order follows `order` and the adjacency
/// order as given.
inline constexpr std::uint32_t kUnmatched = 0xffffffffU;
std::vector<std::uint32_t> maximum_matching(const BipartitePair& pair,
                                            const std::vector<std::uint32_t>& order);

/// Repeated maximum-matching extraction: each round shuffles the A order and
/// the adjacency lists from stream (seed, "match-round", round), computes a
/// maximum matching, and keeps it only if it is perfect. The first
/// non-perfect round ends extraction; the remaining edges form the residual.
MatchingFamily pack_matchings(const BipartitePair& pair, std::uint64_t seed);
MatchingFamily pack_matchings(const Graph& g, std::size_t nu, std::uint64_t seed);

/// floor((1 - eta^(1/3)) d nu): the matching count guaranteed for an
/// (eta,d)-regular pair. Requires 0 < eta < 1 and 0 <= d <= 1.
std::size_t fk_pseudo_target(double eta, double d, std::size_t nu);

struct RandomPairDelta {
  double value = 0;
  bool vacuous = false;  // value >= 1, the guarantee says nothing
};

/// delta = sqrt(16 ln(nu) / (nu p)) for a random pair B(nu,nu,p).
/// Takes nu as a real so boundary cases like nu = e are expressible.
RandomPairDelta fk_random_delta(double nu, double p);

}  // namespace tfpack
