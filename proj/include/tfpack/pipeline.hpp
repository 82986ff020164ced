#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tfpack/blowup.hpp"
#include "tfpack/graph.hpp"
#include "tfpack/procedure1.hpp"
#include "tfpack/tree.hpp"

namespace tfpack {

/// One asymptotic "lhs >> rhs" condition evaluated at finite size.
struct FeasibilityCondition {
  std::string name;
  std::string formula;
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
  bool pass = false;
};

struct FeasibilityReport {
  double slack = 1.0;
  std::vector<FeasibilityCondition> conditions;

  const FeasibilityCondition& at(const std::string& name) const;
};

/// Evaluates the five growth conditions with natural logs:
///   thm1            eps^6 n p^4  vs  ln^3 n
///   thm2            eps^4 n p    vs  ln^2 n
///   gnp_regularity  eps^2 n p^2  vs  ln n
///   blowup_lemma    eps^2 n p^4  vs  ln n
///   hat_codegree    eps^6 n p^2  vs  ln^3 n
/// pass iff ratio >= slack. Advisory only.
FeasibilityReport check_feasibility(std::size_t n, double p, double epsilon, double slack = 1.0);

enum class PackingVariant { kPseudo, kRandom, kBootstrap };
const char* to_string(PackingVariant v);

struct PackOptions {
  std::optional<std::size_t> r_override;
  double scale = 1.0;
  unsigned threads = 1;
  /// Edge probability used for the reported targets; defaults to the
  /// host's empirical density m / C(n,2).
  std::optional<double> density;
  /// Replaces the random layouts of run_procedure1 (testing hook).
  std::optional<std::vector<PermutationLayout>> layouts;
};

/// Per blow-up (pseudo/random) or per outer factor (bootstrap) audit row.
struct BlowupPacking {
  std::size_t index = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // part or block pairs
  std::vector<std::size_t> pair_edges;                     // edges available per pair
  std::vector<std::size_t> matching_counts;                // s per pair
  std::size_t factors = 0;                                 // min of matching_counts
  double target = 0;            // guaranteed matching count per pair (real)
  bool target_vacuous = false;  // guarantee says nothing at this size
  std::optional<double> target_ratio;  // factors / floor(target)
  std::optional<bool> hat_regular;     // (7 eps, p/kappa)-regular blow-up
};

struct LossBreakdown {
  std::size_t within_part = 0;
  std::size_t uncovered_pair = 0;
  std::size_t matching_shortfall = 0;
};

struct OuterSummary {
  std::size_t tau = 0;
  std::size_t ell = 0;
  std::size_t r = 0;
  std::size_t factors = 0;
  std::size_t pairs_used = 0;
  Rational coverage{0};
};

struct PackingResult {
  PackingVariant variant = PackingVariant::kPseudo;
  std::size_t n = 0;
  std::size_t t = 0;
  std::optional<TreeTemplate> tree;
  double density = 0;
  std::vector<TFactor> factors;
  std::vector<std::size_t> factor_source;  // blow-up / outer factor index
  std::size_t covered_edges = 0;
  std::size_t total_edges = 0;
  Rational coverage{0};
  std::vector<BlowupPacking> per_blowup;
  std::optional<KappaSummary> kappa;
  std::optional<LossBreakdown> loss;
  std::optional<OuterSummary> outer;
  std::string diagnostic;
};

/// run_procedure1, then per labeled blow-up: pack every super-edge with
/// pack_matchings and zip the j-th matchings into min_j s_j factors.
/// Targets use the (eta, d)-regular-pair count with eta = 7 eps and
/// d = density / (r q).
PackingResult pack_pseudo(const Graph& g, const TreeTemplate& tree, double epsilon,
                          std::uint64_t seed, const PackOptions& options = {});

/// Same flow; targets use the random-pair count (1 - delta) q' nu with
/// q' = density / ((1 + eps) r q).
PackingResult pack_random(const Graph& g, const TreeTemplate& tree, double epsilon,
                          std::uint64_t seed, const PackOptions& options = {});

struct BootstrapPlan {
  std::size_t tau = 0;
  std::size_t ell = 0;
  double C = 0;       // tau / eps^2, advisory
  double tau1 = 0;    // smallest tau where thm1 holds for (eps^3, 1) at slack
  double tau0 = 0;    // max(tau1, eps^-3)
  std::optional<std::size_t> outer_r_override;
  double outer_scale = 1.0;
};

/// Throws DivisibilityError unless t | tau and tau | n.
BootstrapPlan make_bootstrap_plan(std::size_t n, std::size_t t, std::size_t tau, double epsilon,
                                  double slack = 1.0, std::optional<double> C = std::nullopt);

/// Splits V into tau consecutive blocks, packs K_tau with pack_pseudo, then
/// packs every block pair used by an outer factor and lifts each outer
/// factor to min-over-its-pairs full T-factors.
PackingResult pack_bootstrap(const Graph& g, const TreeTemplate& tree, const BootstrapPlan& plan,
                             double epsilon, std::uint64_t seed, unsigned threads = 1,
                             std::optional<double> density = std::nullopt);

/// First host edge used by two factors (or by one factor twice).
std::optional<Edge> find_shared_edge(std::span<const TFactor> factors);

/// Re-verifies every factor and global edge-disjointness against g and
/// returns covered / total. Throws VerificationError on any failure.
Rational coverage_of(const PackingResult& result, const Graph& g);

}  // namespace tfpack
