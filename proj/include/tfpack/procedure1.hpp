#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "tfpack/blowup.hpp"
#include "tfpack/graph.hpp"
#include "tfpack/tree.hpp"

namespace tfpack {

/// ceil(scale * 30/eps^2 * t^2/(t-1) * ln n).
std::size_t r_value(double epsilon, std::size_t t, std::size_t n, double scale = 1.0);

/// 60/eps^2 * ln n: the typical number of blow-ups containing an edge.
double kappa_target(double epsilon, std::size_t n);

/// r random blow-ups of g plus the edge-disjoint labeled subgraphs.
struct LabeledFamily {
  static constexpr std::int32_t kUnlabeled = -1;

  std::size_t n = 0;
  std::size_t t = 0;
  std::size_t r = 0;
  std::size_t r_full = 0;  // r_value at scale 1, for reporting
  double epsilon = 0;
  double kappa = 0;         // kappa_target(epsilon, n)
  std::vector<BlowupGraph> blowups;
  /// Indexed by host edge rank: the chosen blow-up (0-based) or kUnlabeled.
  std::vector<std::int32_t> labels;
  /// Indexed by host edge rank: |L_e|, the number of blow-ups containing e.
  std::vector<std::uint32_t> appearance_counts;
  /// hat_graphs[i] keeps exactly the edges of blowups[i] labeled i.
  std::vector<BlowupGraph> hat_graphs;

  std::size_t labeled_edges() const;
};

struct Procedure1Options {
  std::optional<std::size_t> r_override;
  double scale = 1.0;
  unsigned threads = 1;
};

/// Draws layouts from streams (seed, "layout", i), then labels edge e with a
/// uniform element of its sorted L_e using stream (seed, "label", e).
/// Throws DivisibilityError if t does not divide n.
LabeledFamily run_procedure1(const Graph& g, const TreeTemplate& tree, double epsilon,
                             std::uint64_t seed, const Procedure1Options& options = {});

/// Same, with caller-supplied layouts in place of the random ones.
LabeledFamily run_procedure1(const Graph& g, const TreeTemplate& tree, double epsilon,
                             std::uint64_t seed, std::vector<PermutationLayout> layouts,
                             unsigned threads = 1);

struct KappaSummary {
  std::size_t r = 0;
  std::size_t r_full = 0;
  double kappa = 0;          // 60/eps^2 ln n
  double kappa_scaled = 0;   // 2(t-1)/t^2 * r
  double expected = 0;       // r * q
  std::uint32_t min_count = 0;
  std::uint32_t max_count = 0;
  double mean_count = 0;
  double fraction_outside = 0;         // outside (1 +- eps) kappa
  double fraction_outside_scaled = 0;  // outside (1 +- eps) kappa_scaled
  std::size_t unlabeled_edges = 0;
  std::map<std::uint32_t, std::size_t> histogram;  // count -> edges
};

KappaSummary kappa_report(const LabeledFamily& family, double epsilon);

}  // namespace tfpack
