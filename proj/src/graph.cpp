#include "tfpack/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "tfpack/errors.hpp"
#include "tfpack/rng.hpp"

namespace tfpack {

Graph::Graph(std::size_t n, std::vector<Edge> edges, std::size_t bitset_threshold)
    : n_(n), edges_(std::move(edges)) {
  if (n_ > std::numeric_limits<Vertex>::max()) {
    throw InvalidArgument("vertex count too large");
  }
  for (const Edge& e : edges_) {
    if (e.u == e.v) {
      throw InvalidArgument("self-loop at vertex " + std::to_string(e.u));
    }
    if (e.v >= n_) {
      throw InvalidArgument("vertex id " + std::to_string(e.v) + " out of range for n = " +
                            std::to_string(n_));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) {
    throw InvalidArgument("duplicate edge " + std::to_string(dup->u) + " " +
                          std::to_string(dup->v));
  }

  offsets_.assign(n_ + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
  neighbors_.resize(2 * edges_.size());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  // Edges are sorted by (u, v), so appending in order leaves every list sorted:
  // u's later neighbors arrive in increasing v, and v's neighbors u arrive in
  // increasing u with all of them < v.
  for (const Edge& e : edges_) {
    neighbors_[fill[e.u]++] = e.v;
    neighbors_[fill[e.v]++] = e.u;
  }
  for (std::size_t v = 0; v < n_; ++v) {
    std::sort(neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
  }

  if (n_ > 0 && n_ <= bitset_threshold) {
    words_ = (n_ + 63) / 64;
    bits_.assign(n_ * words_, 0);
    for (const Edge& e : edges_) {
      bits_[e.u * words_ + e.v / 64] |= std::uint64_t{1} << (e.v % 64);
      bits_[e.v * words_ + e.u / 64] |= std::uint64_t{1} << (e.u % 64);
    }
  }
}

Graph Graph::complete(std::size_t n) {
  std::vector<Edge> edges;
  edges.reserve(n * (n > 0 ? n - 1 : 0) / 2);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph(n, std::move(edges));
}

Graph Graph::complete_bipartite(std::size_t nu) {
  std::vector<Edge> edges;
  edges.reserve(nu * nu);
  for (Vertex a = 0; a < nu; ++a)
    for (Vertex b = 0; b < nu; ++b) edges.emplace_back(a, static_cast<Vertex>(nu + b));
  return Graph(2 * nu, std::move(edges));
}

bool Graph::has_edge(Vertex a, Vertex b) const {
  if (a >= n_ || b >= n_ || a == b) return false;
  if (!bits_.empty()) return (bits_[a * words_ + b / 64] >> (b % 64)) & 1U;
  auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::optional<std::size_t> Graph::edge_rank(Vertex a, Vertex b) const {
  if (a == b) return std::nullopt;
  Edge key(a, b);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

std::size_t Graph::codegree(Vertex a, Vertex b) const {
  if (!bits_.empty()) {
    const std::uint64_t* ra = bits_.data() + a * words_;
    const std::uint64_t* rb = bits_.data() + b * words_;
    std::size_t count = 0;
    for (std::size_t w = 0; w < words_; ++w) count += std::popcount(ra[w] & rb[w]);
    return count;
  }
  auto na = neighbors(a);
  auto nb = neighbors(b);
  std::size_t count = 0;
  auto i = na.begin();
  auto j = nb.begin();
  while (i != na.end() && j != nb.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

namespace {

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("probability must lie in [0,1]");
}

}  // namespace

Graph generate_gnp(std::size_t n, double p, std::uint64_t seed) {
  check_probability(p);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    RandomStream rng(seed, "gnp", u);
    for (Vertex v = u + 1; v < n; ++v) {
      if (rng.bernoulli(p)) edges.emplace_back(u, v);
    }
  }
  return Graph(n, std::move(edges));
}

Graph generate_bipartite(std::size_t nu, double p, std::uint64_t seed) {
  check_probability(p);
  std::vector<Edge> edges;
  for (Vertex a = 0; a < nu; ++a) {
    RandomStream rng(seed, "bipartite", a);
    for (Vertex b = 0; b < nu; ++b) {
      if (rng.bernoulli(p)) edges.emplace_back(a, static_cast<Vertex>(nu + b));
    }
  }
  return Graph(2 * nu, std::move(edges));
}

RegularityReport certify_regular(const Graph& g, double epsilon, double p) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  check_probability(p);

  RegularityReport report;
  report.epsilon = epsilon;
  report.p = p;
  const std::size_t n = g.num_vertices();
  const double nd = static_cast<double>(n);

  report.min_degree = n == 0 ? 0 : std::numeric_limits<std::size_t>::max();
  for (Vertex v = 0; v < n; ++v) {
    if (g.degree(v) < report.min_degree) {
      report.min_degree = g.degree(v);
      report.worst_degree_vertex = v;
    }
  }
  if (n >= 2) report.worst_codegree_pair = {0, 1};
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      std::size_t c = g.codegree(u, v);
      if (c > report.max_codegree) {
        report.max_codegree = c;
        report.worst_codegree_pair = {u, v};
      }
    }
  }
  report.degree_ok = static_cast<double>(report.min_degree) >= (1.0 - epsilon) * nd * p;
  report.codegree_ok = static_cast<double>(report.max_codegree) <= (1.0 + epsilon) * nd * p * p;
  return report;
}

namespace {

bool parse_unsigned(std::string_view token, std::uint64_t& out) {
  if (token.empty()) return false;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc{} && ptr == token.data() + token.size();
}

// Splits a line into exactly two unsigned integers.
bool parse_pair(const std::string& line, std::uint64_t& a, std::uint64_t& b) {
  std::istringstream ss(line);
  std::string x, y, extra;
  if (!(ss >> x >> y) || (ss >> extra)) return false;
  return parse_unsigned(x, a) && parse_unsigned(y, b);
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError(0, "empty edge list");
  std::uint64_t n = 0, m = 0;
  if (!parse_pair(line, n, m)) throw ParseError(line_no, "expected header \"n m\"");
  if (n > std::numeric_limits<Vertex>::max()) throw ParseError(line_no, "vertex count too large");

  std::vector<Edge> edges;
  edges.reserve(m);
  std::vector<std::size_t> lines;
  lines.reserve(m);
  for (std::uint64_t k = 0; k < m; ++k) {
    if (!next_line()) {
      throw ParseError(line_no + 1, "expected " + std::to_string(m) + " edges, found " +
                                        std::to_string(k));
    }
    std::uint64_t u = 0, v = 0;
    if (!parse_pair(line, u, v)) throw ParseError(line_no, "malformed edge line");
    if (u >= n || v >= n) throw ParseError(line_no, "vertex id out of range");
    if (u == v) throw ParseError(line_no, "self-loop");
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    lines.push_back(line_no);
  }
  if (next_line()) throw ParseError(line_no, "more edges than declared");

  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return edges[a] != edges[b] ? edges[a] < edges[b] : lines[a] < lines[b];
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (edges[order[i]] == edges[order[i - 1]]) {
      throw ParseError(lines[order[i]], "duplicate edge");
    }
  }
  return Graph(n, std::move(edges));
}

Graph read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_edge_list(g, out);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace tfpack
