#include "tfpack/procedure1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tfpack/errors.hpp"
#include "tfpack/parallel.hpp"

namespace tfpack {

std::size_t r_value(double epsilon, std::size_t t, std::size_t n, double scale) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  if (t < 2) throw InvalidArgument("r needs t >= 2");
  if (n < 2) throw InvalidArgument("r needs n >= 2");
  if (!(scale > 0.0)) throw InvalidArgument("scale must be positive");
  const double td = static_cast<double>(t);
  const double r = scale * 30.0 / (epsilon * epsilon) * td * td / (td - 1.0) *
                   std::log(static_cast<double>(n));
  return static_cast<std::size_t>(std::ceil(r - 1e-9));
}

double kappa_target(double epsilon, std::size_t n) {
  return 60.0 / (epsilon * epsilon) * std::log(static_cast<double>(n));
}

std::size_t LabeledFamily::labeled_edges() const {
  return static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [](std::int32_t l) { return l != kUnlabeled; }));
}

LabeledFamily run_procedure1(const Graph& g, const TreeTemplate& tree, double epsilon,
                             std::uint64_t seed, const Procedure1Options& options) {
  const std::size_t n = g.num_vertices();
  const std::size_t t = tree.size();
  if (n % t != 0) throw DivisibilityError(t, n);
  const std::size_t r = options.r_override ? *options.r_override
                                           : r_value(epsilon, t, n, options.scale);
  std::vector<PermutationLayout> layouts(r);
  parallel_for(r, options.threads, [&](std::size_t i) {
    RandomStream rng(seed, "layout", i);
    layouts[i] = random_layout(n, t, rng);
  });
  return run_procedure1(g, tree, epsilon, seed, std::move(layouts), options.threads);
}

LabeledFamily run_procedure1(const Graph& g, const TreeTemplate& tree, double epsilon,
                             std::uint64_t seed, std::vector<PermutationLayout> layouts,
                             unsigned threads) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  const std::size_t n = g.num_vertices();
  const std::size_t t = tree.size();
  if (n % t != 0) throw DivisibilityError(t, n);
  if (layouts.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    throw InvalidArgument("too many layouts");
  }

  LabeledFamily family;
  family.n = n;
  family.t = t;
  family.r = layouts.size();
  family.epsilon = epsilon;
  family.kappa = n >= 2 ? kappa_target(epsilon, n) : 0.0;
  family.r_full = (t >= 2 && n >= 2) ? r_value(epsilon, t, n, 1.0) : 0;

  family.blowups.resize(family.r);
  parallel_for(family.r, threads, [&](std::size_t i) {
    family.blowups[i] = build_blowup(g, layouts[i], tree, false);
  });

  std::vector<bool> joined(t * t, false);
  for (const Edge& e : tree.edges()) {
    joined[e.u * t + e.v] = true;
    joined[e.v * t + e.u] = true;
  }

  const std::size_t m = g.num_edges();
  family.labels.assign(m, LabeledFamily::kUnlabeled);
  family.appearance_counts.assign(m, 0);
  auto edges = g.edges();
  parallel_for(m, threads, [&](std::size_t rank) {
    const Edge& e = edges[rank];
    std::vector<std::int32_t> containing;  // L_e, ascending
    for (std::size_t i = 0; i < family.r; ++i) {
      const auto& layout = layouts[i];
      if (joined[layout.part_of(e.u) * t + layout.part_of(e.v)]) {
        containing.push_back(static_cast<std::int32_t>(i));
      }
    }
    family.appearance_counts[rank] = static_cast<std::uint32_t>(containing.size());
    if (!containing.empty()) {
      RandomStream rng(seed, "label", rank);
      family.labels[rank] = containing[rng.below(containing.size())];
    }
  });

  family.hat_graphs.reserve(family.r);
  for (std::size_t i = 0; i < family.r; ++i) {
    family.hat_graphs.push_back(BlowupGraph{family.blowups[i].layout, tree, {}, false});
  }
  for (std::size_t rank = 0; rank < m; ++rank) {
    if (family.labels[rank] != LabeledFamily::kUnlabeled) {
      family.hat_graphs[static_cast<std::size_t>(family.labels[rank])].kept_edges.push_back(
          edges[rank]);
    }
  }
  return family;
}

KappaSummary kappa_report(const LabeledFamily& family, double epsilon) {
  KappaSummary s;
  s.r = family.r;
  s.r_full = family.r_full;
  s.kappa = family.kappa;
  const std::size_t t = family.t;
  const std::size_t n = family.n;
  if (t >= 2 && n >= 2) {
    const double td = static_cast<double>(t);
    s.kappa_scaled = 2.0 * (td - 1.0) / (td * td) * static_cast<double>(family.r);
    s.expected = boost::rational_cast<double>(crossing_probability(t, n)) *
                 static_cast<double>(family.r);
  }

  const auto& counts = family.appearance_counts;
  if (!counts.empty()) {
    s.min_count = *std::min_element(counts.begin(), counts.end());
    s.max_count = *std::max_element(counts.begin(), counts.end());
  }
  double sum = 0;
  std::size_t outside = 0, outside_scaled = 0;
  for (std::uint32_t c : counts) {
    sum += c;
    ++s.histogram[c];
    const double x = c;
    if (x < (1 - epsilon) * s.kappa || x > (1 + epsilon) * s.kappa) ++outside;
    if (x < (1 - epsilon) * s.kappa_scaled || x > (1 + epsilon) * s.kappa_scaled) ++outside_scaled;
  }
  for (std::int32_t l : family.labels) s.unlabeled_edges += l == LabeledFamily::kUnlabeled;
  if (!counts.empty()) {
    const double m = static_cast<double>(counts.size());
    s.mean_count = sum / m;
    s.fraction_outside = static_cast<double>(outside) / m;
    s.fraction_outside_scaled = static_cast<double>(outside_scaled) / m;
  }
  return s;
}

}  // namespace tfpack
