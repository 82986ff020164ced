#include <doctest.h>

#include <map>
#include <sstream>

#include "support.hpp"
#include "tfpack/errors.hpp"
#include "tfpack/rng.hpp"
#include "tfpack/tree.hpp"

using namespace tfpack;

namespace {

TreeTemplate relabel(const TreeTemplate& tree, const std::vector<Vertex>& perm) {
  std::vector<Edge> edges;
  for (const Edge& e : tree.edges()) edges.emplace_back(perm[e.u], perm[e.v]);
  return TreeTemplate(tree.size(), edges);
}

// Two disjoint 3-paths 0-1-2 and 3-4-5.
Graph two_paths() { return Graph(6, {Edge(0, 1), Edge(1, 2), Edge(3, 4), Edge(4, 5)}); }

TFactor two_path_factor() {
  return TFactor{{TreeCopy{{0, 1, 2}, {Edge(0, 1), Edge(1, 2)}},
                  TreeCopy{{3, 4, 5}, {Edge(3, 4), Edge(4, 5)}}}};
}

}  // namespace

TEST_CASE("TreeTemplate validation") {
  CHECK_NOTHROW(TreeTemplate(1, {}));
  CHECK_NOTHROW(TreeTemplate::path(5));
  CHECK_THROWS_AS(TreeTemplate(3, {Edge(0, 1)}), InvalidArgument);
  CHECK_THROWS_AS(TreeTemplate(4, {Edge(0, 1), Edge(1, 2), Edge(0, 2)}), InvalidArgument);
  CHECK_THROWS_AS(TreeTemplate(4, {Edge(0, 1), Edge(0, 1), Edge(2, 3)}), InvalidArgument);
  CHECK_THROWS_AS(TreeTemplate(3, {Edge(0, 1), Edge(1, 3)}), InvalidArgument);
  CHECK_THROWS_AS(TreeTemplate(0, {}), InvalidArgument);
}

TEST_CASE("ahu_isomorphic examples") {
  CHECK_FALSE(ahu_isomorphic(TreeTemplate::path(4), TreeTemplate::star(4)));
  CHECK(ahu_isomorphic(TreeTemplate::path(2), TreeTemplate::path(2)));
  std::vector<Vertex> perm = {0, 1, 2, 3};
  do {
    CHECK(ahu_isomorphic(TreeTemplate::path(4), relabel(TreeTemplate::path(4), perm)));
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("ahu_isomorphic agrees with brute force for t <= 7") {
  for (std::size_t t = 1; t <= 7; ++t) {
    auto trees = testsupport::all_labeled_trees(t);
    // Sample pairs so the t = 7 case (16807 trees) stays fast.
    RandomStream rng(t, "test-ahu", 0);
    const std::size_t pairs = t <= 5 ? trees.size() * trees.size() : 4000;
    for (std::size_t k = 0; k < pairs; ++k) {
      std::size_t i, j;
      if (t <= 5) {
        i = k / trees.size();
        j = k % trees.size();
      } else {
        i = rng.below(trees.size());
        j = rng.below(trees.size());
      }
      TreeTemplate a(t, trees[i]), b(t, trees[j]);
      REQUIRE(ahu_isomorphic(a, b) == testsupport::brute_isomorphic(t, trees[i], trees[j]));
    }
  }
}

TEST_CASE("unlabeled tree counts come out right") {
  // OEIS A000055: 1, 1, 1, 2, 3, 6, 11 for t = 1..7.
  const std::map<std::size_t, std::size_t> expected = {{1, 1}, {2, 1}, {3, 1}, {4, 2},
                                                       {5, 3}, {6, 6}, {7, 11}};
  for (auto [t, count] : expected) {
    std::set<std::string> forms;
    for (const auto& edges : testsupport::all_labeled_trees(t))
      forms.insert(TreeTemplate(t, edges).canonical_form());
    CHECK(forms.size() == count);
  }
}

TEST_CASE("tree file round trip and errors") {
  std::istringstream in("4\n0 1\n1 2\n1 3\n");
  TreeTemplate tree = read_tree(in);
  CHECK(tree.size() == 4);
  CHECK(ahu_isomorphic(tree, TreeTemplate::star(4)));
  std::stringstream out;
  write_tree(tree, out);
  CHECK(read_tree(out) == tree);

  std::istringstream path3("3\n0 1\n1 2\n");
  CHECK_NOTHROW(read_tree(path3));
  std::istringstream bad("3\n0 1\n");
  CHECK_THROWS(read_tree(bad));
  std::istringstream garbage("3\n0 x\n1 2\n");
  CHECK_THROWS_AS(read_tree(garbage), ParseError);
}

TEST_CASE("verify_tfactor examples") {
  Graph g = two_paths();
  TreeTemplate p3 = TreeTemplate::path(3);
  CHECK(verify_tfactor(g, p3, two_path_factor()).ok());

  TFactor shared = two_path_factor();
  shared.copies[1].vertices = {0, 4, 5};
  shared.copies[1].edges = {Edge(0, 4), Edge(4, 5)};
  Verdict v = verify_tfactor(g, p3, shared);
  CHECK(v.violation == Violation::kNonDisjoint);
  REQUIRE(v.vertex.has_value());
  CHECK(*v.vertex == 0);

  TFactor absent = two_path_factor();
  absent.copies[0].vertices = {0, 5, 1};
  absent.copies[1].vertices = {3, 4, 2};
  absent.copies[0].edges = {Edge(0, 5), Edge(0, 1)};
  absent.copies[1].edges = {Edge(3, 4), Edge(2, 3)};
  Verdict w = verify_tfactor(Graph(6, {Edge(0, 1), Edge(2, 3), Edge(3, 4)}), p3, absent);
  CHECK(w.violation == Violation::kNonSubgraph);
  REQUIRE(w.edge.has_value());
  CHECK(*w.edge == Edge(0, 5));
}

TEST_CASE("verify_tfactor names each violation") {
  Graph g = Graph::complete(6);
  TreeTemplate p3 = TreeTemplate::path(3);
  TFactor f = two_path_factor();

  TFactor few = f;
  few.copies.pop_back();
  CHECK(verify_tfactor(g, p3, few).violation == Violation::kSizeMismatch);

  TFactor shape = f;
  shape.copies[0].edges.pop_back();
  CHECK(verify_tfactor(g, p3, shape).violation == Violation::kBadCopyShape);

  TFactor outside = f;
  outside.copies[0].edges[1] = Edge(1, 4);
  CHECK(verify_tfactor(g, p3, outside).violation == Violation::kEdgeOutsideCopy);

  TFactor star = f;
  CHECK(verify_tfactor(g, TreeTemplate::star(3), star).ok());
  TreeTemplate p4 = TreeTemplate::path(4);
  Graph k8 = Graph::complete(8);
  TFactor stars{{TreeCopy{{0, 1, 2, 3}, {Edge(0, 1), Edge(0, 2), Edge(0, 3)}},
                 TreeCopy{{4, 5, 6, 7}, {Edge(4, 5), Edge(5, 6), Edge(6, 7)}}}};
  Verdict iso = verify_tfactor(k8, p4, stars);
  CHECK(iso.violation == Violation::kNotIsomorphic);
  CHECK(iso.copy == 0);

  TFactor cycle{{TreeCopy{{0, 1, 2, 3}, {Edge(0, 1), Edge(1, 2), Edge(0, 2)}},
                 TreeCopy{{4, 5, 6, 7}, {Edge(4, 5), Edge(5, 6), Edge(6, 7)}}}};
  CHECK(verify_tfactor(k8, p4, cycle).violation == Violation::kNotIsomorphic);

  CHECK_THROWS_AS(verify_tfactor(Graph::complete(7), p3, f), DivisibilityError);
}

TEST_CASE("verify_tfactor is independent of copy order") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    RandomStream rng(seed, "test-order", 0);
    const std::size_t t = 2 + rng.below(4);
    const std::size_t nu = 1 + rng.below(6);
    const std::size_t n = t * nu;
    Graph g = generate_gnp(n, 0.8, seed);
    std::vector<Vertex> sigma(n);
    for (std::size_t i = 0; i < n; ++i) sigma[i] = static_cast<Vertex>(i);
    rng.shuffle(std::span<Vertex>(sigma));
    TFactor f;
    TreeTemplate tree = TreeTemplate::path(t);
    for (std::size_t c = 0; c < nu; ++c) {
      TreeCopy copy;
      for (std::size_t k = 0; k < t; ++k) copy.vertices.push_back(sigma[c * t + k]);
      for (std::size_t k = 0; k + 1 < t; ++k) copy.edges.emplace_back(copy.vertices[k], copy.vertices[k + 1]);
      f.copies.push_back(copy);
    }
    const bool ok = verify_tfactor(g, tree, f).ok();
    for (int round = 0; round < 5; ++round) {
      rng.shuffle(std::span<TreeCopy>(f.copies));
      CHECK(verify_tfactor(g, tree, f).ok() == ok);
    }
  }
}

TEST_CASE("assemble_factor examples") {
  TreeTemplate k2 = TreeTemplate::path(2);
  std::vector<std::vector<Vertex>> parts = {{0, 1}, {2, 3}};
  std::vector<std::vector<Edge>> m = {{Edge(0, 3), Edge(1, 2)}};
  TFactor f = assemble_factor(std::span<const std::vector<Vertex>>(parts), k2,
                              std::span<const std::vector<Edge>>(m));
  REQUIRE(f.copies.size() == 2);
  std::set<Edge> got;
  for (const auto& c : f.copies) got.insert(c.edges.at(0));
  CHECK(got == std::set<Edge>{Edge(0, 3), Edge(1, 2)});

  // a = {0,1}, b = {2,3}, c = {4,5}
  TreeTemplate p3 = TreeTemplate::path(3);
  std::vector<std::vector<Vertex>> parts3 = {{0, 1}, {2, 3}, {4, 5}};
  std::vector<std::vector<Edge>> m3 = {{Edge(0, 2), Edge(1, 3)}, {Edge(2, 4), Edge(3, 5)}};
  TFactor g3 = assemble_factor(std::span<const std::vector<Vertex>>(parts3), p3,
                               std::span<const std::vector<Edge>>(m3));
  REQUIRE(g3.copies.size() == 2);
  std::set<std::vector<Vertex>> paths;
  for (const auto& c : g3.copies) paths.insert(c.vertices);
  CHECK(paths == std::set<std::vector<Vertex>>{{0, 2, 4}, {1, 3, 5}});

  std::vector<std::vector<Edge>> partial = {{Edge(0, 2)}, {Edge(2, 4), Edge(3, 5)}};
  CHECK_THROWS_AS(assemble_factor(std::span<const std::vector<Vertex>>(parts3), p3,
                                  std::span<const std::vector<Edge>>(partial)),
                  InvalidArgument);
  std::vector<std::vector<Edge>> wrong = {{Edge(0, 4), Edge(1, 5)}, {Edge(2, 4), Edge(3, 5)}};
  CHECK_THROWS_AS(assemble_factor(std::span<const std::vector<Vertex>>(parts3), p3,
                                  std::span<const std::vector<Edge>>(wrong)),
                  InvalidArgument);
}

TEST_CASE("assembled factors always verify") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RandomStream rng(seed, "test-assemble", 0);
    const std::size_t t = 2 + rng.below(6);
    const std::size_t nu = 1 + rng.below(60 / t);
    const std::size_t n = t * nu;
    auto shapes = testsupport::all_labeled_trees(t);
    TreeTemplate tree(t, shapes[rng.below(shapes.size())]);
    std::vector<Vertex> sigma(n);
    for (std::size_t i = 0; i < n; ++i) sigma[i] = static_cast<Vertex>(i);
    rng.shuffle(std::span<Vertex>(sigma));
    std::vector<std::vector<Vertex>> parts(t);
    for (std::size_t k = 0; k < t; ++k) parts[k].assign(sigma.begin() + k * nu, sigma.begin() + (k + 1) * nu);
    std::vector<std::vector<Edge>> matchings;
    std::vector<Edge> host;
    for (const Edge& te : tree.edges()) {
      std::vector<Vertex> perm = parts[te.v];
      rng.shuffle(std::span<Vertex>(perm));
      std::vector<Edge> m;
      for (std::size_t i = 0; i < nu; ++i) m.emplace_back(parts[te.u][i], perm[i]);
      host.insert(host.end(), m.begin(), m.end());
      matchings.push_back(m);
    }
    TFactor f = assemble_factor(std::span<const std::vector<Vertex>>(parts), tree,
                                std::span<const std::vector<Edge>>(matchings));
    Graph g(n, host);
    REQUIRE(verify_tfactor(g, tree, f).ok());
    for (const auto& c : f.copies)
      for (std::size_t k = 0; k < t; ++k) CHECK(std::find(parts[k].begin(), parts[k].end(), c.vertices[k]) != parts[k].end());
  }
}
