#include "tfpack/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "tfpack/errors.hpp"
#include "tfpack/matching.hpp"
#include "tfpack/parallel.hpp"

namespace tfpack {

const FeasibilityCondition& FeasibilityReport::at(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return c;
  throw InvalidArgument("unknown feasibility condition " + name);
}

FeasibilityReport check_feasibility(std::size_t n, double p, double epsilon, double slack) {
  if (n < 2) throw InvalidArgument("feasibility needs n >= 2");
  if (!(slack > 0.0)) throw InvalidArgument("slack must be positive");
  const double nd = static_cast<double>(n);
  const double ln = std::log(nd);
  FeasibilityReport report;
  report.slack = slack;
  auto add = [&](std::string name, std::string formula, double lhs, double rhs) {
    FeasibilityCondition c{std::move(name), std::move(formula), lhs, rhs, lhs / rhs, false};
    c.pass = c.ratio >= slack;
    report.conditions.push_back(std::move(c));
  };
  add("thm1", "eps^6 n p^4 >> ln^3 n", std::pow(epsilon, 6) * nd * std::pow(p, 4), ln * ln * ln);
  add("thm2", "eps^4 n p >> ln^2 n", std::pow(epsilon, 4) * nd * p, ln * ln);
  add("gnp_regularity", "eps^2 n p^2 >> ln n", epsilon * epsilon * nd * p * p, ln);
  add("blowup_lemma", "eps^2 n p^4 >> ln n", epsilon * epsilon * nd * std::pow(p, 4), ln);
  add("hat_codegree", "eps^6 n p^2 >> ln^3 n", std::pow(epsilon, 6) * nd * p * p, ln * ln * ln);
  return report;
}

const char* to_string(PackingVariant v) {
  switch (v) {
    case PackingVariant::kPseudo: return "pseudo";
    case PackingVariant::kRandom: return "random";
    case PackingVariant::kBootstrap: return "bootstrap";
  }
  return "unknown";
}

namespace {

double empirical_density(const Graph& g) {
  const double n = static_cast<double>(g.num_vertices());
  return n < 2 ? 0.0 : static_cast<double>(g.num_edges()) / (n * (n - 1) / 2);
}

Rational ratio_of(std::size_t num, std::size_t den) {
  if (den == 0) return Rational(0);
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

// Host-coordinate edges of matching k of a family across parts (a_side, b_side).
std::vector<Edge> lift_matching(const MatchingFamily& family, std::size_t k,
                                std::span<const Vertex> a_side, std::span<const Vertex> b_side) {
  std::vector<Edge> out;
  out.reserve(family.nu);
  for (std::size_t a = 0; a < family.nu; ++a) {
    out.emplace_back(a_side[a], b_side[family.matchings[k][a]]);
  }
  return out;
}

void set_target_ratio(BlowupPacking& row) {
  const double floor_target = std::floor(row.target + 1e-9);
  if (!row.target_vacuous && floor_target >= 1.0) {
    row.target_ratio = static_cast<double>(row.factors) / floor_target;
  }
}

PackingResult pack_blowups(PackingVariant variant, const Graph& g, const TreeTemplate& tree,
                           double epsilon, std::uint64_t seed, const PackOptions& options) {
  const std::size_t n = g.num_vertices();
  const std::size_t t = tree.size();
  if (t < 2) throw InvalidArgument("template tree needs at least two vertices");
  if (n % t != 0) throw DivisibilityError(t, n);

  PackingResult result;
  result.variant = variant;
  result.n = n;
  result.t = t;
  result.tree = tree;
  result.density = options.density.value_or(empirical_density(g));
  result.total_edges = g.num_edges();

  LabeledFamily family =
      options.layouts
          ? run_procedure1(g, tree, epsilon, seed, *options.layouts, options.threads)
          : run_procedure1(g, tree, epsilon, seed,
                           Procedure1Options{options.r_override, options.scale, options.threads});
  result.kappa = kappa_report(family, epsilon);

  const std::size_t r = family.r;
  const std::size_t nu = n / t;
  const std::size_t pairs_per_blowup = t - 1;
  // Expected number of blow-ups holding an edge; the labeled subgraphs thin
  // each super-edge by roughly this factor.
  const double kappa_eff = result.kappa->expected;

  std::vector<BlowupPacking> rows(r);
  std::vector<std::vector<MatchingFamily>> families(r);
  parallel_for(r, options.threads, [&](std::size_t i) {
    const BlowupGraph& hat = family.hat_graphs[i];
    BlowupPacking& row = rows[i];
    row.index = i;
    families[i].reserve(pairs_per_blowup);
    for (std::size_t k = 0; k < pairs_per_blowup; ++k) {
      const Edge& se = hat.super_edges()[k];
      BipartitePair pair = hat.super_edge_pair(k);
      const std::uint64_t pair_seed =
          RandomStream::derive_key(seed, "pack", i * pairs_per_blowup + k);
      families[i].push_back(pack_matchings(pair, pair_seed));
      row.pairs.emplace_back(se.u, se.v);
      row.pair_edges.push_back(pair.num_edges());
      row.matching_counts.push_back(families[i].back().size());
    }
    row.factors = *std::min_element(row.matching_counts.begin(), row.matching_counts.end());

    if (kappa_eff > 0.0) {
      if (variant == PackingVariant::kPseudo) {
        const double eta = 7.0 * epsilon;
        const double d = std::min(1.0, result.density / kappa_eff);
        if (eta < 1.0) {
          row.target = (1.0 - std::cbrt(eta)) * d * static_cast<double>(nu);
          row.hat_regular = all_ok(certify_blowup(hat, eta, d));
        } else {
          row.target_vacuous = true;
        }
      } else {
        const double q = result.density / ((1.0 + epsilon) * kappa_eff);
        if (nu > 1 && q > 0.0) {
          RandomPairDelta delta = fk_random_delta(static_cast<double>(nu), q);
          row.target = std::max(0.0, (1.0 - delta.value) * q * static_cast<double>(nu));
          row.target_vacuous = delta.vacuous;
        } else {
          row.target_vacuous = true;
        }
      }
    } else {
      row.target_vacuous = true;
    }
    set_target_ratio(row);
  });

  for (std::size_t i = 0; i < r; ++i) {
    const BlowupGraph& hat = family.hat_graphs[i];
    for (std::size_t f = 0; f < rows[i].factors; ++f) {
      std::vector<std::vector<Edge>> matchings;
      matchings.reserve(pairs_per_blowup);
      for (std::size_t k = 0; k < pairs_per_blowup; ++k) {
        const Edge& se = hat.super_edges()[k];
        matchings.push_back(
            lift_matching(families[i][k], f, hat.layout.part(se.u), hat.layout.part(se.v)));
      }
      result.factors.push_back(assemble_factor(hat.layout, tree, matchings));
      result.factor_source.push_back(i);
    }
  }
  result.per_blowup = std::move(rows);
  result.covered_edges = result.factors.size() * nu * (t - 1);
  result.coverage = ratio_of(result.covered_edges, result.total_edges);
  if (r == 0) result.diagnostic = "no blow-ups (r = 0)";
  return result;
}

}  // namespace

PackingResult pack_pseudo(const Graph& g, const TreeTemplate& tree, double epsilon,
                          std::uint64_t seed, const PackOptions& options) {
  return pack_blowups(PackingVariant::kPseudo, g, tree, epsilon, seed, options);
}

PackingResult pack_random(const Graph& g, const TreeTemplate& tree, double epsilon,
                          std::uint64_t seed, const PackOptions& options) {
  return pack_blowups(PackingVariant::kRandom, g, tree, epsilon, seed, options);
}

namespace {

// Smallest tau beyond the dip of tau / ln^3 tau where thm1 holds for
// (eps^3, 1)-regular graphs on tau vertices. The ratio increases for
// tau >= e^3, so search from there.
double smallest_thm1_tau(std::size_t t, double epsilon, double slack) {
  const double coeff = std::pow(epsilon, 18);
  auto holds = [&](double tau) {
    const double ln = std::log(tau);
    return coeff * tau / (ln * ln * ln) >= slack;
  };
  double lo = std::max<double>(static_cast<double>(t), 21.0);
  if (holds(lo)) return lo;
  double hi = lo;
  while (!holds(hi)) {
    lo = hi;
    hi *= 2;
    if (hi > 1e300) return std::numeric_limits<double>::infinity();
  }
  // Integer bisection while representable, otherwise relative precision.
  while (hi - lo > 1.0 && (hi - lo) / hi > 1e-12) {
    double mid = std::floor((lo + hi) / 2);
    if (holds(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

BootstrapPlan make_bootstrap_plan(std::size_t n, std::size_t t, std::size_t tau, double epsilon,
                                  double slack, std::optional<double> C) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  if (t == 0 || tau == 0) throw InvalidArgument("t and tau must be positive");
  if (tau % t != 0) throw DivisibilityError(t, tau);
  if (n % tau != 0) throw DivisibilityError(tau, n);
  BootstrapPlan plan;
  plan.tau = tau;
  plan.ell = n / tau;
  plan.C = C.value_or(static_cast<double>(tau) / (epsilon * epsilon));
  plan.tau1 = smallest_thm1_tau(t, epsilon, slack);
  plan.tau0 = std::max(plan.tau1, std::pow(epsilon, -3));
  return plan;
}

PackingResult pack_bootstrap(const Graph& g, const TreeTemplate& tree, const BootstrapPlan& plan,
                             double epsilon, std::uint64_t seed, unsigned threads,
                             std::optional<double> density) {
  const std::size_t n = g.num_vertices();
  const std::size_t t = tree.size();
  const std::size_t tau = plan.tau;
  if (t < 2) throw InvalidArgument("template tree needs at least two vertices");
  if (tau == 0) throw InvalidArgument("tau must be positive");
  if (tau % t != 0) throw DivisibilityError(t, tau);
  if (n % tau != 0) throw DivisibilityError(tau, n);
  const std::size_t ell = n / tau;

  PackingResult result;
  result.variant = PackingVariant::kBootstrap;
  result.n = n;
  result.t = t;
  result.tree = tree;
  result.density = density.value_or(empirical_density(g));
  result.total_edges = g.num_edges();

  auto block_of = [ell](Vertex v) { return static_cast<std::size_t>(v / ell); };
  auto block = [ell](std::size_t b) {
    std::vector<Vertex> vs(ell);
    for (std::size_t x = 0; x < ell; ++x) vs[x] = static_cast<Vertex>(b * ell + x);
    return vs;
  };

  PackOptions outer_options;
  outer_options.r_override = plan.outer_r_override;
  outer_options.scale = plan.outer_scale;
  outer_options.threads = threads;
  outer_options.density = 1.0;
  PackingResult outer = pack_pseudo(Graph::complete(tau), tree, epsilon,
                                    RandomStream::derive_key(seed, "outer", 0), outer_options);

  OuterSummary summary;
  summary.tau = tau;
  summary.ell = ell;
  summary.r = outer.kappa ? outer.kappa->r : 0;
  summary.factors = outer.factors.size();
  summary.coverage = outer.coverage;

  // Every block pair used by some outer factor, with its matching family.
  std::vector<std::pair<std::size_t, std::size_t>> used;
  for (const TFactor& f : outer.factors)
    for (const TreeCopy& c : f.copies)
      for (const Edge& te : tree.edges()) used.emplace_back(c.vertices[te.u], c.vertices[te.v]);
  summary.pairs_used = used.size();
  result.outer = summary;

  std::vector<MatchingFamily> families(used.size());
  std::vector<std::size_t> pair_edges(used.size());
  parallel_for(used.size(), threads, [&](std::size_t k) {
    auto [ba, bb] = used[k];
    BipartitePair pair(ell);
    for (std::size_t x = 0; x < ell; ++x) {
      for (Vertex w : g.neighbors(static_cast<Vertex>(ba * ell + x))) {
        if (block_of(w) == bb) pair.adj[x].push_back(static_cast<std::uint32_t>(w - bb * ell));
      }
    }
    pair_edges[k] = pair.num_edges();
    families[k] = pack_matchings(pair, RandomStream::derive_key(seed, "pair", ba * tau + bb));
  });

  const double p = result.density;
  double pair_target = 0;
  bool pair_target_vacuous = true;
  if (ell > 1 && p > 0.0) {
    RandomPairDelta delta = fk_random_delta(static_cast<double>(ell), p);
    pair_target = std::max(0.0, (1.0 - delta.value) * static_cast<double>(ell) * p);
    pair_target_vacuous = delta.vacuous;
  }

  const std::size_t pairs_per_factor = (tau / t) * (t - 1);
  std::size_t next_pair = 0;
  for (std::size_t f = 0; f < outer.factors.size(); ++f) {
    const TFactor& outer_factor = outer.factors[f];
    BlowupPacking row;
    row.index = f;
    for (std::size_t k = next_pair; k < next_pair + pairs_per_factor; ++k) {
      row.pairs.push_back(used[k]);
      row.pair_edges.push_back(pair_edges[k]);
      row.matching_counts.push_back(families[k].size());
    }
    row.factors = row.matching_counts.empty()
                      ? 0
                      : *std::min_element(row.matching_counts.begin(), row.matching_counts.end());
    row.target = pair_target;
    row.target_vacuous = pair_target_vacuous;
    set_target_ratio(row);

    for (std::size_t s = 0; s < row.factors; ++s) {
      TFactor full;
      std::size_t k = next_pair;
      for (const TreeCopy& c : outer_factor.copies) {
        std::vector<std::vector<Vertex>> parts;
        for (Vertex b : c.vertices) parts.push_back(block(b));
        std::vector<std::vector<Edge>> matchings;
        for (std::size_t e = 0; e < tree.edges().size(); ++e, ++k) {
          auto [ba, bb] = used[k];
          matchings.push_back(lift_matching(families[k], s, block(ba), block(bb)));
        }
        TFactor piece = assemble_factor(std::span<const std::vector<Vertex>>(parts), tree,
                                        matchings);
        for (auto& copy : piece.copies) full.copies.push_back(std::move(copy));
      }
      result.factors.push_back(std::move(full));
      result.factor_source.push_back(f);
    }
    next_pair += pairs_per_factor;
    result.per_blowup.push_back(std::move(row));
  }

  result.covered_edges = result.factors.size() * (n / t) * (t - 1);
  result.coverage = ratio_of(result.covered_edges, result.total_edges);

  std::set<std::pair<std::size_t, std::size_t>> used_set;
  for (auto [a, b] : used) used_set.emplace(std::min(a, b), std::max(a, b));
  LossBreakdown loss;
  std::size_t in_used_pairs = 0;
  for (const Edge& e : g.edges()) {
    const std::size_t a = block_of(e.u), b = block_of(e.v);
    if (a == b) {
      ++loss.within_part;
    } else if (used_set.count({std::min(a, b), std::max(a, b)})) {
      ++in_used_pairs;
    } else {
      ++loss.uncovered_pair;
    }
  }
  loss.matching_shortfall = in_used_pairs - result.covered_edges;
  result.loss = loss;

  if (outer.factors.empty()) {
    result.diagnostic = "outer packing of K_" + std::to_string(tau) +
                        " produced no T-factors; raise tau or set outer_r_override";
  }
  return result;
}

std::optional<Edge> find_shared_edge(std::span<const TFactor> factors) {
  std::vector<Edge> all;
  for (const TFactor& f : factors)
    for (const TreeCopy& c : f.copies) all.insert(all.end(), c.edges.begin(), c.edges.end());
  std::sort(all.begin(), all.end());
  auto dup = std::adjacent_find(all.begin(), all.end());
  if (dup == all.end()) return std::nullopt;
  return *dup;
}

Rational coverage_of(const PackingResult& result, const Graph& g) {
  if (!result.tree) throw VerificationError("result carries no template tree");
  if (result.total_edges != g.num_edges()) {
    throw VerificationError("result was computed for a different graph");
  }
  std::size_t covered = 0;
  for (std::size_t i = 0; i < result.factors.size(); ++i) {
    Verdict v = verify_tfactor(g, *result.tree, result.factors[i]);
    if (!v.ok()) {
      throw VerificationError("factor " + std::to_string(i) + ": " + to_string(v.violation) +
                              ": " + v.message);
    }
    for (const TreeCopy& c : result.factors[i].copies) covered += c.edges.size();
  }
  if (auto shared = find_shared_edge(result.factors)) {
    throw VerificationError("edge (" + std::to_string(shared->u) + "," +
                            std::to_string(shared->v) + ") appears in two factors");
  }
  if (covered != result.covered_edges) {
    throw VerificationError("covered edge count disagrees with the factors");
  }
  return ratio_of(covered, g.num_edges());
}

}  // namespace tfpack
