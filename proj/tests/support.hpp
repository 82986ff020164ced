#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "tfpack/graph.hpp"
#include "tfpack/tree.hpp"

namespace testsupport {

using tfpack::Edge;
using tfpack::Graph;
using tfpack::Vertex;

inline std::vector<std::vector<bool>> adjacency_matrix(const Graph& g) {
  std::vector<std::vector<bool>> a(g.num_vertices(), std::vector<bool>(g.num_vertices(), false));
  for (const Edge& e : g.edges()) a[e.u][e.v] = a[e.v][e.u] = true;
  return a;
}

// Tree isomorphism by trying every vertex bijection.
inline bool brute_isomorphic(std::size_t t, const std::vector<Edge>& a, const std::vector<Edge>& b) {
  if (a.size() != b.size()) return false;
  std::set<std::pair<Vertex, Vertex>> target;
  for (const Edge& e : b) target.insert({e.u, e.v});
  std::vector<Vertex> perm(t);
  for (std::size_t i = 0; i < t; ++i) perm[i] = static_cast<Vertex>(i);
  do {
    bool all = true;
    for (const Edge& e : a) {
      Edge m(perm[e.u], perm[e.v]);
      if (!target.count({m.u, m.v})) {
        all = false;
        break;
      }
    }
    if (all) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// All labeled trees on t vertices via Pruefer sequences.
inline std::vector<std::vector<Edge>> all_labeled_trees(std::size_t t) {
  std::vector<std::vector<Edge>> out;
  if (t == 1) return {{}};
  if (t == 2) return {{Edge(0, 1)}};
  std::vector<Vertex> seq(t - 2, 0);
  while (true) {
    std::vector<int> degree(t, 1);
    for (Vertex x : seq) ++degree[x];
    std::vector<Edge> edges;
    for (Vertex x : seq) {
      for (std::size_t leaf = 0; leaf < t; ++leaf) {
        if (degree[leaf] == 1) {
          edges.emplace_back(static_cast<Vertex>(leaf), x);
          --degree[leaf];
          --degree[x];
          break;
        }
      }
    }
    std::vector<Vertex> rest;
    for (std::size_t v = 0; v < t; ++v)
      if (degree[v] == 1) rest.push_back(static_cast<Vertex>(v));
    edges.emplace_back(rest[0], rest[1]);
    out.push_back(edges);
    std::size_t i = 0;
    while (i < seq.size() && ++seq[i] == t) seq[i++] = 0;
    if (i == seq.size()) break;
  }
  return out;
}

// Every host edge used by the factors, with multiplicity.
inline std::multiset<std::pair<Vertex, Vertex>> used_edges(const std::vector<tfpack::TFactor>& fs) {
  std::multiset<std::pair<Vertex, Vertex>> used;
  for (const auto& f : fs)
    for (const auto& c : f.copies)
      for (const Edge& e : c.edges) used.insert({e.u, e.v});
  return used;
}

inline bool pairwise_disjoint(const std::vector<tfpack::TFactor>& fs) {
  auto used = used_edges(fs);
  for (auto it = used.begin(); it != used.end(); ++it)
    if (used.count(*it) > 1) return false;
  return true;
}

}  // namespace testsupport
