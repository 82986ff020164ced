#include "tfpack/tree.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "tfpack/errors.hpp"

namespace tfpack {

namespace {

std::string encode(const std::vector<std::vector<Vertex>>& adj, Vertex root) {
  // Iterative post-order so deep paths do not blow the stack.
  const std::size_t t = adj.size();
  std::vector<Vertex> parent(t, static_cast<Vertex>(t));
  std::vector<Vertex> order;
  order.reserve(t);
  std::vector<Vertex> stack{root};
  parent[root] = root;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (Vertex w : adj[v]) {
      if (parent[w] == t) {
        parent[w] = v;
        stack.push_back(w);
      }
    }
  }
  std::vector<std::string> code(t);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Vertex v = *it;
    std::vector<std::string> children;
    for (Vertex w : adj[v]) {
      if (parent[w] == v && w != root) children.push_back(std::move(code[w]));
    }
    std::sort(children.begin(), children.end());
    std::string s = "(";
    for (auto& c : children) s += c;
    s += ")";
    code[v] = std::move(s);
  }
  return code[root];
}

std::vector<Vertex> centers(const std::vector<std::vector<Vertex>>& adj) {
  const std::size_t t = adj.size();
  if (t <= 2) {
    std::vector<Vertex> all(t);
    for (Vertex v = 0; v < t; ++v) all[v] = v;
    return all;
  }
  std::vector<std::size_t> deg(t);
  std::vector<Vertex> leaves;
  for (Vertex v = 0; v < t; ++v) {
    deg[v] = adj[v].size();
    if (deg[v] <= 1) leaves.push_back(v);
  }
  std::size_t remaining = t;
  while (remaining > 2) {
    remaining -= leaves.size();
    std::vector<Vertex> next;
    for (Vertex leaf : leaves) {
      for (Vertex w : adj[leaf]) {
        if (--deg[w] == 1) next.push_back(w);
      }
    }
    leaves = std::move(next);
  }
  std::sort(leaves.begin(), leaves.end());
  return leaves;
}

}  // namespace

TreeTemplate::TreeTemplate(std::size_t t, std::vector<Edge> edges)
    : t_(t), edges_(std::move(edges)), adjacency_(t) {
  if (t_ == 0) throw InvalidArgument("tree must have at least one vertex");
  if (edges_.size() != t_ - 1) {
    throw InvalidArgument("tree on " + std::to_string(t_) + " vertices needs " +
                          std::to_string(t_ - 1) + " edges, got " +
                          std::to_string(edges_.size()));
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw InvalidArgument("tree has a repeated edge");
  }
  for (const Edge& e : edges_) {
    if (e.u == e.v) throw InvalidArgument("tree has a self-loop");
    if (e.v >= t_) throw InvalidArgument("tree vertex id out of range");
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  // t-1 edges plus connectivity means acyclic.
  std::vector<bool> seen(t_, false);
  std::vector<Vertex> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : adjacency_[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  if (reached != t_) throw InvalidArgument("edges do not form a connected tree");

  for (Vertex c : centers(adjacency_)) {
    std::string code = encode(adjacency_, c);
    if (canonical_.empty() || code < canonical_) canonical_ = std::move(code);
  }
}

TreeTemplate TreeTemplate::path(std::size_t t) {
  std::vector<Edge> edges;
  for (Vertex i = 0; i + 1 < t; ++i) edges.emplace_back(i, i + 1);
  return TreeTemplate(t, std::move(edges));
}

TreeTemplate TreeTemplate::star(std::size_t t) {
  std::vector<Edge> edges;
  for (Vertex i = 1; i < t; ++i) edges.emplace_back(0, i);
  return TreeTemplate(t, std::move(edges));
}

bool ahu_isomorphic(const TreeTemplate& a, const TreeTemplate& b) {
  return a.size() == b.size() && a.canonical_form() == b.canonical_form();
}

TreeTemplate read_tree(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError(0, "empty tree file");
  std::istringstream header(line);
  long long t = 0;
  std::string extra;
  if (!(header >> t) || (header >> extra) || t < 1) {
    throw ParseError(line_no, "expected positive vertex count");
  }
  std::vector<Edge> edges;
  for (long long k = 0; k + 1 < t; ++k) {
    if (!next_line()) throw ParseError(line_no + 1, "missing tree edge");
    std::istringstream ss(line);
    long long i = -1, j = -1;
    if (!(ss >> i >> j) || (ss >> extra)) throw ParseError(line_no, "malformed tree edge");
    if (i < 0 || j < 0 || i >= t || j >= t) throw ParseError(line_no, "tree vertex out of range");
    if (i == j) throw ParseError(line_no, "self-loop");
    edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
  }
  if (next_line()) throw ParseError(line_no, "extra lines after tree edges");
  try {
    return TreeTemplate(static_cast<std::size_t>(t), std::move(edges));
  } catch (const InvalidArgument& e) {
    throw ParseError(0, e.what());
  }
}

TreeTemplate read_tree(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_tree(in);
}

void write_tree(const TreeTemplate& tree, std::ostream& out) {
  out << tree.size() << '\n';
  for (const Edge& e : tree.edges()) out << e.u << ' ' << e.v << '\n';
}

const char* to_string(Violation v) {
  switch (v) {
    case Violation::kNone: return "ok";
    case Violation::kSizeMismatch: return "size-mismatch";
    case Violation::kBadCopyShape: return "bad-copy-shape";
    case Violation::kNonDisjoint: return "non-disjoint";
    case Violation::kNotSpanning: return "not-spanning";
    case Violation::kEdgeOutsideCopy: return "edge-outside-copy";
    case Violation::kNonSubgraph: return "non-subgraph";
    case Violation::kNotIsomorphic: return "not-isomorphic";
  }
  return "unknown";
}

Verdict verify_tfactor(const Graph& g, const TreeTemplate& tree, const TFactor& f) {
  const std::size_t n = g.num_vertices();
  const std::size_t t = tree.size();
  if (n % t != 0) throw DivisibilityError(t, n);

  Verdict verdict;
  auto fail = [&](Violation v, std::size_t copy, std::string message) {
    verdict.violation = v;
    verdict.copy = copy;
    verdict.message = std::move(message);
    return verdict;
  };

  if (f.copies.size() != n / t) {
    return fail(Violation::kSizeMismatch, 0,
                "expected " + std::to_string(n / t) + " copies, got " +
                    std::to_string(f.copies.size()));
  }

  constexpr std::size_t kUnowned = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(n, kUnowned);
  for (std::size_t c = 0; c < f.copies.size(); ++c) {
    const TreeCopy& copy = f.copies[c];
    if (copy.vertices.size() != t || copy.edges.size() + 1 != t) {
      return fail(Violation::kBadCopyShape, c,
                  "copy " + std::to_string(c) + " has " + std::to_string(copy.vertices.size()) +
                      " vertices and " + std::to_string(copy.edges.size()) + " edges");
    }
    for (Vertex v : copy.vertices) {
      if (v >= n) {
        verdict.vertex = v;
        return fail(Violation::kBadCopyShape, c, "vertex " + std::to_string(v) + " out of range");
      }
      if (owner[v] != kUnowned) {
        verdict.vertex = v;
        return fail(Violation::kNonDisjoint, c,
                    "vertex " + std::to_string(v) + " used by copies " +
                        std::to_string(owner[v]) + " and " + std::to_string(c));
      }
      owner[v] = c;
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (owner[v] == kUnowned) {
      verdict.vertex = v;
      return fail(Violation::kNotSpanning, 0, "vertex " + std::to_string(v) + " not covered");
    }
  }

  for (std::size_t c = 0; c < f.copies.size(); ++c) {
    const TreeCopy& copy = f.copies[c];
    std::unordered_map<Vertex, Vertex> local;
    for (std::size_t k = 0; k < t; ++k) local.emplace(copy.vertices[k], static_cast<Vertex>(k));
    std::vector<Edge> relabeled;
    relabeled.reserve(copy.edges.size());
    for (const Edge& e : copy.edges) {
      if (owner[e.u] != c || owner[e.v] != c || e.u >= n || e.v >= n) {
        verdict.edge = e;
        return fail(Violation::kEdgeOutsideCopy, c,
                    "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                        ") leaves copy " + std::to_string(c));
      }
      if (!g.has_edge(e.u, e.v)) {
        verdict.edge = e;
        return fail(Violation::kNonSubgraph, c,
                    "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                        ") is not in the host graph");
      }
      relabeled.emplace_back(local.at(e.u), local.at(e.v));
    }
    std::optional<TreeTemplate> shape;
    try {
      shape.emplace(t, std::move(relabeled));
    } catch (const InvalidArgument& e) {
      return fail(Violation::kNotIsomorphic, c,
                  "copy " + std::to_string(c) + " is not a tree: " + e.what());
    }
    if (!ahu_isomorphic(*shape, tree)) {
      return fail(Violation::kNotIsomorphic, c,
                  "copy " + std::to_string(c) + " is not isomorphic to the template");
    }
  }
  return verdict;
}

TFactor assemble_factor(std::span<const std::vector<Vertex>> parts, const TreeTemplate& tree,
                        std::span<const std::vector<Edge>> matchings) {
  const std::size_t t = tree.size();
  if (parts.size() != t) throw InvalidArgument("need one part per template vertex");
  if (matchings.size() != tree.edges().size()) {
    throw InvalidArgument("need one matching per tree edge");
  }
  const std::size_t nu = parts.empty() ? 0 : parts[0].size();

  // (part, position) for every vertex of the layout.
  std::unordered_map<Vertex, std::pair<std::size_t, std::size_t>> where;
  for (std::size_t k = 0; k < t; ++k) {
    if (parts[k].size() != nu) throw InvalidArgument("parts must have equal size");
    for (std::size_t pos = 0; pos < nu; ++pos) {
      if (!where.emplace(parts[k][pos], std::pair{k, pos}).second) {
        throw InvalidArgument("parts overlap");
      }
    }
  }

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  // link[e][0][pos in part i] = pos in part j; link[e][1] the inverse.
  std::vector<std::array<std::vector<std::size_t>, 2>> link(matchings.size());
  for (std::size_t e = 0; e < matchings.size(); ++e) {
    const std::size_t pi = tree.edges()[e].u;
    const std::size_t pj = tree.edges()[e].v;
    const std::string name = "matching for tree edge (" + std::to_string(pi) + "," +
                             std::to_string(pj) + ")";
    if (matchings[e].size() != nu) {
      throw InvalidArgument(name + " has " + std::to_string(matchings[e].size()) +
                            " pairs, expected " + std::to_string(nu));
    }
    link[e][0].assign(nu, kNone);
    link[e][1].assign(nu, kNone);
    for (const Edge& pair : matchings[e]) {
      auto a = where.find(pair.u);
      auto b = where.find(pair.v);
      if (a == where.end() || b == where.end()) {
        throw InvalidArgument(name + " uses a vertex outside the layout");
      }
      auto [part_a, pos_a] = a->second;
      auto [part_b, pos_b] = b->second;
      if (part_a == pj && part_b == pi) {
        std::swap(part_a, part_b);
        std::swap(pos_a, pos_b);
      }
      if (part_a != pi || part_b != pj) throw InvalidArgument(name + " joins the wrong parts");
      if (link[e][0][pos_a] != kNone || link[e][1][pos_b] != kNone) {
        throw InvalidArgument(name + " is not a matching");
      }
      link[e][0][pos_a] = pos_b;
      link[e][1][pos_b] = pos_a;
    }
  }

  // Template traversal order from vertex 0: (child, parent, edge index, dir).
  struct Step {
    std::size_t child, parent, edge;
    int dir;
  };
  std::vector<Step> steps;
  std::vector<bool> seen(t, false);
  std::vector<std::size_t> queue{0};
  seen[0] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::size_t v = queue[head];
    for (std::size_t e = 0; e < tree.edges().size(); ++e) {
      const Edge& te = tree.edges()[e];
      if (te.u == v && !seen[te.v]) {
        steps.push_back({te.v, v, e, 0});
      } else if (te.v == v && !seen[te.u]) {
        steps.push_back({te.u, v, e, 1});
      } else {
        continue;
      }
      seen[steps.back().child] = true;
      queue.push_back(steps.back().child);
    }
  }

  TFactor factor;
  factor.copies.reserve(nu);
  for (std::size_t root_pos = 0; root_pos < nu; ++root_pos) {
    std::vector<std::size_t> pos(t);
    pos[0] = root_pos;
    for (const Step& s : steps) pos[s.child] = link[s.edge][s.dir][pos[s.parent]];
    TreeCopy copy;
    copy.vertices.resize(t);
    for (std::size_t k = 0; k < t; ++k) copy.vertices[k] = parts[k][pos[k]];
    for (const Edge& te : tree.edges()) copy.edges.emplace_back(copy.vertices[te.u], copy.vertices[te.v]);
    factor.copies.push_back(std::move(copy));
  }
  return factor;
}

}  // namespace tfpack
