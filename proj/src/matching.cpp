#include "tfpack/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "tfpack/errors.hpp"
#include "tfpack/rng.hpp"

namespace tfpack {

BipartitePair::BipartitePair(std::size_t side_a, std::size_t side_b,
                             const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges)
    : nu(side_a), adj(side_a) {
  if (side_a != side_b) {
    throw InvalidArgument("unbalanced sides: " + std::to_string(side_a) + " vs " +
                          std::to_string(side_b));
  }
  for (auto [a, b] : edges) {
    if (a >= nu || b >= nu) throw InvalidArgument("pair vertex out of range");
    adj[a].push_back(b);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
      throw InvalidArgument("duplicate pair edge");
    }
  }
}

BipartitePair BipartitePair::from_graph(const Graph& g, std::size_t nu) {
  if (g.num_vertices() != 2 * nu) {
    throw InvalidArgument("unbalanced sides: graph has " + std::to_string(g.num_vertices()) +
                          " vertices, expected 2*" + std::to_string(nu));
  }
  BipartitePair pair(nu);
  for (const Edge& e : g.edges()) {
    if ((e.u < nu) == (e.v < nu)) {
      throw InvalidArgument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            ") lies within one side");
    }
    pair.adj[e.u].push_back(static_cast<std::uint32_t>(e.v - nu));
  }
  for (auto& list : pair.adj) std::sort(list.begin(), list.end());
  return pair;
}

std::size_t BipartitePair::num_edges() const {
  std::size_t m = 0;
  for (const auto& list : adj) m += list.size();
  return m;
}

namespace {

class HopcroftKarp {
 public:
  HopcroftKarp(const BipartitePair& pair, const std::vector<std::uint32_t>& order)
      : pair_(pair),
        order_(order),
        mate_a_(pair.nu, kUnmatched),
        mate_b_(pair.nu, kUnmatched),
        level_(pair.nu),
        cursor_(pair.nu) {}

  std::vector<std::uint32_t> run() {
    while (bfs()) {
      std::fill(cursor_.begin(), cursor_.end(), 0);
      for (std::uint32_t a : order_) {
        if (mate_a_[a] == kUnmatched) dfs(a);
      }
    }
    return std::move(mate_a_);
  }

 private:
  static constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

  bool bfs() {
    std::queue<std::uint32_t> queue;
    for (std::uint32_t a : order_) {
      if (mate_a_[a] == kUnmatched) {
        level_[a] = 0;
        queue.push(a);
      } else {
        level_[a] = kInf;
      }
    }
    bool found = false;
    while (!queue.empty()) {
      std::uint32_t a = queue.front();
      queue.pop();
      for (std::uint32_t b : pair_.adj[a]) {
        std::uint32_t next = mate_b_[b];
        if (next == kUnmatched) {
          found = true;
        } else if (level_[next] == kInf) {
          level_[next] = level_[a] + 1;
          queue.push(next);
        }
      }
    }
    return found;
  }

  // Iterative layered DFS; recursion depth could reach nu.
  bool dfs(std::uint32_t root) {
    std::vector<std::uint32_t> path{root};
    std::vector<std::uint32_t> via;
    while (!path.empty()) {
      std::uint32_t a = path.back();
      const auto& nbrs = pair_.adj[a];
      bool advanced = false;
      while (cursor_[a] < nbrs.size()) {
        std::uint32_t b = nbrs[cursor_[a]++];
        std::uint32_t next = mate_b_[b];
        if (next == kUnmatched) {
          via.push_back(b);
          for (std::size_t k = 0; k < path.size(); ++k) {
            mate_a_[path[k]] = via[k];
            mate_b_[via[k]] = path[k];
          }
          return true;
        }
        if (level_[next] == level_[a] + 1) {
          via.push_back(b);
          path.push_back(next);
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        level_[a] = kInf;
        path.pop_back();
        if (!via.empty()) via.pop_back();
      }
    }
    return false;
  }

  const BipartitePair& pair_;
  const std::vector<std::uint32_t>& order_;
  std::vector<std::uint32_t> mate_a_;
  std::vector<std::uint32_t> mate_b_;
  std::vector<std::uint32_t> level_;
  std::vector<std::size_t> cursor_;
};

}  // namespace

std::vector<std::uint32_t> maximum_matching(const BipartitePair& pair,
                                            const std::vector<std::uint32_t>& order) {
  return HopcroftKarp(pair, order).run();
}

MatchingFamily pack_matchings(const BipartitePair& pair, std::uint64_t seed) {
  if (pair.adj.size() != pair.nu) throw InvalidArgument("malformed bipartite pair");
  MatchingFamily family;
  family.nu = pair.nu;
  BipartitePair remaining = pair;
  for (auto& list : remaining.adj) std::sort(list.begin(), list.end());
  if (pair.nu == 0) return family;

  for (std::uint64_t round = 0;; ++round) {
    RandomStream rng(seed, "match-round", round);
    std::vector<std::uint32_t> order(pair.nu);
    for (std::uint32_t a = 0; a < pair.nu; ++a) order[a] = a;
    rng.shuffle(std::span(order));
    BipartitePair shuffled = remaining;
    for (auto& list : shuffled.adj) rng.shuffle(std::span(list));

    std::vector<std::uint32_t> mate = maximum_matching(shuffled, order);
    if (std::find(mate.begin(), mate.end(), kUnmatched) != mate.end()) break;

    for (std::uint32_t a = 0; a < pair.nu; ++a) {
      auto& list = remaining.adj[a];
      list.erase(std::lower_bound(list.begin(), list.end(), mate[a]));
    }
    family.matchings.push_back(std::move(mate));
  }

  for (std::uint32_t a = 0; a < pair.nu; ++a) {
    for (std::uint32_t b : remaining.adj[a]) family.residual.emplace_back(a, b);
  }
  return family;
}

MatchingFamily pack_matchings(const Graph& g, std::size_t nu, std::uint64_t seed) {
  return pack_matchings(BipartitePair::from_graph(g, nu), seed);
}

std::size_t fk_pseudo_target(double eta, double d, std::size_t nu) {
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidArgument("eta must lie in (0,1)");
  if (!(d >= 0.0 && d <= 1.0)) throw InvalidArgument("d must lie in [0,1]");
  const double value = (1.0 - std::cbrt(eta)) * d * static_cast<double>(nu);
  // Absorb rounding noise so exact products like 0.9 * 500 floor to 450.
  return static_cast<std::size_t>(std::floor(value + 1e-9));
}

RandomPairDelta fk_random_delta(double nu, double p) {
  if (!(nu > 1.0)) throw InvalidArgument("nu must exceed 1");
  if (!(p > 0.0)) throw InvalidArgument("p must be positive");
  RandomPairDelta delta;
  delta.value = std::sqrt(16.0 * std::log(nu) / (nu * p));
  delta.vacuous = delta.value >= 1.0;
  return delta;
}

}  // namespace tfpack
