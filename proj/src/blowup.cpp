#include "tfpack/blowup.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "tfpack/errors.hpp"

namespace tfpack {

std::vector<std::vector<Vertex>> PermutationLayout::parts() const {
  std::vector<std::vector<Vertex>> out(t_);
  for (std::size_t k = 0; k < t_; ++k) {
    auto p = part(k);
    out[k].assign(p.begin(), p.end());
  }
  return out;
}

PermutationLayout build_layout(std::size_t n, std::size_t t, std::vector<Vertex> sigma) {
  if (t == 0) throw InvalidArgument("part count must be positive");
  if (n % t != 0) throw DivisibilityError(t, n);
  if (sigma.size() != n) throw InvalidArgument("permutation length differs from n");
  PermutationLayout layout;
  layout.t_ = t;
  layout.nu_ = n / t;
  layout.part_of_.assign(n, std::numeric_limits<std::uint32_t>::max());
  layout.position_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    Vertex v = sigma[i];
    if (v >= n || layout.part_of_[v] != std::numeric_limits<std::uint32_t>::max()) {
      throw InvalidArgument("sigma is not a permutation of {0..n-1}");
    }
    layout.part_of_[v] = static_cast<std::uint32_t>(i / layout.nu_);
    layout.position_[v] = static_cast<std::uint32_t>(i % layout.nu_);
  }
  layout.sigma_ = std::move(sigma);
  return layout;
}

PermutationLayout random_layout(std::size_t n, std::size_t t, RandomStream& rng) {
  std::vector<Vertex> sigma(n);
  for (std::size_t i = 0; i < n; ++i) sigma[i] = static_cast<Vertex>(i);
  rng.shuffle(std::span(sigma));
  return build_layout(n, t, std::move(sigma));
}

BlowupGraph build_blowup(const Graph& g, const PermutationLayout& layout, const TreeTemplate& tree,
                         bool prime) {
  if (layout.num_parts() != tree.size()) {
    throw InvalidArgument("layout has " + std::to_string(layout.num_parts()) +
                          " parts but the tree has " + std::to_string(tree.size()) + " vertices");
  }
  if (layout.num_vertices() != g.num_vertices()) {
    throw InvalidArgument("layout covers " + std::to_string(layout.num_vertices()) +
                          " vertices but the graph has " + std::to_string(g.num_vertices()));
  }
  const std::size_t t = tree.size();
  std::vector<bool> joined(t * t, false);
  for (const Edge& e : tree.edges()) {
    joined[e.u * t + e.v] = true;
    joined[e.v * t + e.u] = true;
  }
  BlowupGraph b{layout, tree, {}, prime};
  for (const Edge& e : g.edges()) {
    auto pu = layout.part_of(e.u);
    auto pv = layout.part_of(e.v);
    if (pu == pv) continue;
    if (prime || joined[pu * t + pv]) b.kept_edges.push_back(e);
  }
  return b;
}

BipartitePair BlowupGraph::super_edge_pair(std::size_t k) const {
  const Edge& se = super_edges()[k];
  BipartitePair pair(layout.part_size());
  for (const Edge& e : kept_edges) {
    auto pu = layout.part_of(e.u);
    auto pv = layout.part_of(e.v);
    if (pu == se.u && pv == se.v) {
      pair.adj[layout.position_of(e.u)].push_back(layout.position_of(e.v));
    } else if (pu == se.v && pv == se.u) {
      pair.adj[layout.position_of(e.v)].push_back(layout.position_of(e.u));
    }
  }
  for (auto& list : pair.adj) std::sort(list.begin(), list.end());
  return pair;
}

namespace {

// Degree and same-side co-degree extremes across one part pair.
PairRegularityReport certify_pair(const BlowupGraph& b, std::size_t i, std::size_t j,
                                  double epsilon, double p) {
  const std::size_t nu = b.layout.part_size();
  const std::size_t words = (nu + 63) / 64;
  // rows[0][x] = bitset of part-j positions adjacent to position x of part i,
  // rows[1] the same from part j's side.
  std::vector<std::uint64_t> rows[2] = {std::vector<std::uint64_t>(nu * words, 0),
                                        std::vector<std::uint64_t>(nu * words, 0)};
  std::vector<std::size_t> degree[2] = {std::vector<std::size_t>(nu, 0),
                                        std::vector<std::size_t>(nu, 0)};
  for (const Edge& e : b.kept_edges) {
    auto pu = b.layout.part_of(e.u);
    auto pv = b.layout.part_of(e.v);
    Vertex x, y;
    if (pu == i && pv == j) {
      x = e.u;
      y = e.v;
    } else if (pu == j && pv == i) {
      x = e.v;
      y = e.u;
    } else {
      continue;
    }
    auto px = b.layout.position_of(x);
    auto py = b.layout.position_of(y);
    rows[0][px * words + py / 64] |= std::uint64_t{1} << (py % 64);
    rows[1][py * words + px / 64] |= std::uint64_t{1} << (px % 64);
    ++degree[0][px];
    ++degree[1][py];
  }

  PairRegularityReport report;
  report.pair = {i, j};
  report.epsilon = epsilon;
  report.p = p;
  report.min_cross_degree = nu == 0 ? 0 : std::numeric_limits<std::size_t>::max();
  for (int side = 0; side < 2; ++side) {
    for (std::size_t x = 0; x < nu; ++x) {
      report.min_cross_degree = std::min(report.min_cross_degree, degree[side][x]);
    }
    for (std::size_t x = 0; x < nu; ++x) {
      const std::uint64_t* rx = rows[side].data() + x * words;
      for (std::size_t y = x + 1; y < nu; ++y) {
        const std::uint64_t* ry = rows[side].data() + y * words;
        std::size_t c = 0;
        for (std::size_t w = 0; w < words; ++w) c += std::popcount(rx[w] & ry[w]);
        report.max_within_codegree = std::max(report.max_within_codegree, c);
      }
    }
  }
  const double nud = static_cast<double>(nu);
  report.ok = static_cast<double>(report.min_cross_degree) >= (1.0 - epsilon) * nud * p &&
              static_cast<double>(report.max_within_codegree) <= (1.0 + epsilon) * nud * p * p;
  return report;
}

}  // namespace

std::vector<PairRegularityReport> certify_blowup(const BlowupGraph& b, double epsilon, double p,
                                                 bool strict) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("probability must lie in [0,1]");
  std::vector<PairRegularityReport> reports;
  for (const Edge& se : b.super_edges()) reports.push_back(certify_pair(b, se.u, se.v, epsilon, p));
  if (strict && b.prime) {
    const std::size_t t = b.tree.size();
    for (std::size_t i = 0; i < t; ++i) {
      for (std::size_t j = i + 1; j < t; ++j) {
        Edge key(static_cast<Vertex>(i), static_cast<Vertex>(j));
        if (std::binary_search(b.super_edges().begin(), b.super_edges().end(), key)) continue;
        reports.push_back(certify_pair(b, i, j, epsilon, p));
        reports.back().super_edge = false;
      }
    }
  }
  return reports;
}

Rational crossing_probability(std::size_t t, std::size_t n) {
  if (t < 2) throw InvalidArgument("crossing probability needs t >= 2");
  if (n % t != 0) throw DivisibilityError(t, n);
  const auto ti = static_cast<std::int64_t>(t);
  const auto ni = static_cast<std::int64_t>(n);
  return Rational(2 * (ti - 1), ti * ti) * Rational(ni, ni - 1);
}

TFactor assemble_factor(const PermutationLayout& layout, const TreeTemplate& tree,
                        std::span<const std::vector<Edge>> matchings) {
  auto parts = layout.parts();
  return assemble_factor(std::span<const std::vector<Vertex>>(parts), tree, matchings);
}

}  // namespace tfpack
