#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "tfpack/graph.hpp"
#include "tfpack/matching.hpp"
#include "tfpack/rng.hpp"
#include "tfpack/tree.hpp"

namespace tfpack {

using Rational = boost::rational<std::int64_t>;

/// A permutation sigma of {0..n-1} cut into t consecutive blocks of nu = n/t:
/// part k holds sigma[k*nu .. (k+1)*nu - 1].
class PermutationLayout {
 public:
  PermutationLayout() = default;

  std::size_t num_vertices() const { return sigma_.size(); }
  std::size_t num_parts() const { return t_; }
  std::size_t part_size() const { return nu_; }
  std::span<const Vertex> sigma() const { return sigma_; }

  std::span<const Vertex> part(std::size_t k) const {
    return std::span<const Vertex>(sigma_).subspan(k * nu_, nu_);
  }
  std::vector<std::vector<Vertex>> parts() const;

  std::uint32_t part_of(Vertex v) const { return part_of_[v]; }
  std::uint32_t position_of(Vertex v) const { return position_[v]; }

 private:
  friend PermutationLayout build_layout(std::size_t n, std::size_t t, std::vector<Vertex> sigma);

  std::vector<Vertex> sigma_;
  std::size_t t_ = 0;
  std::size_t nu_ = 0;
  std::vector<std::uint32_t> part_of_;
  std::vector<std::uint32_t> position_;
};

/// Throws DivisibilityError if t does not divide n, InvalidArgument if sigma
/// is not a permutation of {0..n-1}.
PermutationLayout build_layout(std::size_t n, std::size_t t, std::vector<Vertex> sigma);

/// Uniform layout via Fisher-Yates on the given stream.
PermutationLayout random_layout(std::size_t n, std::size_t t, RandomStream& rng);

/// Host edges kept by a layout: those joining the parts of a tree edge
/// (super-edges), or every cross-part edge in the prime variant.
struct BlowupGraph {
  PermutationLayout layout;
  TreeTemplate tree;
  std::vector<Edge> kept_edges;  // sorted
  bool prime = false;

  /// Super-edge k joins parts tree.edges()[k].u and tree.edges()[k].v.
  std::span<const Edge> super_edges() const { return tree.edges(); }

  /// The bipartite graph across super-edge k, A = part u, B = part v, in
  /// within-part positions.
  BipartitePair super_edge_pair(std::size_t k) const;
};

/// Throws InvalidArgument on dimension mismatch.
BlowupGraph build_blowup(const Graph& g, const PermutationLayout& layout, const TreeTemplate& tree,
                         bool prime);

struct PairRegularityReport {
  std::pair<std::size_t, std::size_t> pair{0, 0};
  bool super_edge = true;
  double epsilon = 0;
  double p = 0;
  std::size_t min_cross_degree = 0;
  std::size_t max_within_codegree = 0;
  bool ok = false;
};

/// One report per super-edge (plus every other part pair of a prime
/// blow-up when strict). A pair is ok iff every vertex has at least
/// (1-eps) nu p neighbors across and every same-side pair has at most
/// (1+eps) nu p^2 common neighbors across.
std::vector<PairRegularityReport> certify_blowup(const BlowupGraph& b, double epsilon, double p,
                                                 bool strict = false);

inline bool all_ok(std::span<const PairRegularityReport> reports) {
  for (const auto& r : reports)
    if (!r.ok) return false;
  return true;
}

/// Probability that a fixed pair of vertices crosses a super-edge of a
/// uniformly random layout: 2(t-1)/t^2 * (1 + 1/(n-1)), exactly.
Rational crossing_probability(std::size_t t, std::size_t n);

/// The T-factor built from one perfect matching per super-edge of layout.
TFactor assemble_factor(const PermutationLayout& layout, const TreeTemplate& tree,
                        std::span<const std::vector<Edge>> matchings);

}  // namespace tfpack
