#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tfpack/errors.hpp"
#include "tfpack/pipeline.hpp"
#include "tfpack/rng.hpp"

using namespace tfpack;

namespace {

std::size_t sum_losses(const PackingResult& r) {
  return r.loss->within_part + r.loss->uncovered_pair + r.loss->matching_shortfall + r.covered_edges;
}

// Checks every PackingResult invariant against g independently of coverage_of.
void check_result(const Graph& g, const TreeTemplate& tree, const PackingResult& r) {
  const std::size_t n = g.num_vertices(), t = tree.size();
  for (const auto& f : r.factors) REQUIRE(verify_tfactor(g, tree, f).ok());
  CHECK(testsupport::pairwise_disjoint(r.factors));
  CHECK(r.covered_edges == r.factors.size() * (n / t) * (t - 1));
  CHECK(r.total_edges == g.num_edges());
  if (r.total_edges > 0) CHECK(r.coverage == Rational(r.covered_edges, r.total_edges));
  CHECK(r.coverage >= Rational(0));
  CHECK(r.coverage <= Rational(1));
  std::size_t from_rows = 0;
  for (const auto& row : r.per_blowup) {
    std::size_t least = row.matching_counts.empty() ? 0 : row.matching_counts.front();
    for (std::size_t s : row.matching_counts) least = std::min(least, s);
    CHECK(row.factors == least);
    from_rows += row.factors;
  }
  CHECK(from_rows == r.factors.size());
  CHECK(coverage_of(r, g) == r.coverage);
}

}  // namespace

TEST_CASE("check_feasibility examples") {
  auto a = check_feasibility(1000000, 1.0, 0.5, 1.0);
  CHECK(a.at("thm1").ratio == doctest::Approx(15625.0 / std::pow(std::log(1e6), 3)));
  CHECK(a.at("thm1").ratio == doctest::Approx(5.93).epsilon(1e-2));
  CHECK(a.at("thm1").pass);
  auto b = check_feasibility(10000, 0.01, 0.5, 1.0);
  CHECK(b.at("thm1").lhs == doctest::Approx(1.5625e-6));
  CHECK_FALSE(b.at("thm1").pass);
  auto z = check_feasibility(500, 0.0, 0.5, 1.0);
  REQUIRE(z.conditions.size() == 5);
  for (const auto& c : z.conditions) {
    CHECK(c.ratio == 0.0);
    CHECK_FALSE(c.pass);
  }
  for (const auto& c : check_feasibility(5000, 0.7, 0.3, 2.5).conditions) CHECK(c.pass == (c.ratio >= 2.5));
  CHECK_THROWS_AS(check_feasibility(100, 0.5, 0.5, 0.0), InvalidArgument);
  CHECK_THROWS(a.at("nope"));
}

TEST_CASE("pack_pseudo on K_4 with the identity layout") {
  Graph g = Graph::complete(4);
  TreeTemplate k2 = TreeTemplate::path(2);
  PackOptions opt;
  opt.layouts = std::vector<PermutationLayout>{build_layout(4, 2, {0, 1, 2, 3})};
  auto r = pack_pseudo(g, k2, 0.5, 1, opt);
  CHECK(r.factors.size() == 2);
  CHECK(r.coverage == Rational(2, 3));
  check_result(g, k2, r);
}

TEST_CASE("r = 0 gives an empty packing") {
  Graph g = generate_gnp(20, 0.5, 1);
  PackOptions opt;
  opt.r_override = 0;
  auto r = pack_pseudo(g, TreeTemplate::path(2), 0.5, 1, opt);
  CHECK(r.factors.empty());
  CHECK(r.coverage == Rational(0));
  CHECK(coverage_of(r, g) == Rational(0));
}

TEST_CASE("coverage_of examples") {
  Graph g = Graph::complete(4);
  PackingResult r;
  r.tree = TreeTemplate::path(2);
  r.n = 4;
  r.t = 2;
  r.total_edges = 6;
  CHECK(coverage_of(r, g) == Rational(0));
  r.factors.push_back(TFactor{{TreeCopy{{0, 1}, {Edge(0, 1)}}, TreeCopy{{2, 3}, {Edge(2, 3)}}}});
  r.covered_edges = 2;
  CHECK(coverage_of(r, g) == Rational(1, 3));

  PackingResult twice = r;
  twice.factors.push_back(r.factors[0]);
  twice.covered_edges = 4;
  CHECK_THROWS_AS(coverage_of(twice, g), VerificationError);

  PackingResult bad = r;
  bad.factors[0].copies[0].edges[0] = Edge(0, 2);
  CHECK_THROWS_AS(coverage_of(bad, g), VerificationError);
}

TEST_CASE("pack_pseudo and pack_random invariants over random configs") {
  std::size_t produced = 0;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    RandomStream rng(seed, "test-pipeline", 0);
    const std::size_t t = 2 + rng.below(3);
    const std::size_t n = t * (6 + rng.below(60 / t));
    const double p = rng.bernoulli(0.5) ? 0.5 : 0.9;
    Graph g = generate_gnp(n, p, seed);
    auto shapes = testsupport::all_labeled_trees(t);
    TreeTemplate tree(t, shapes[rng.below(shapes.size())]);
    PackOptions opt;
    opt.scale = 0.003;
    opt.density = p;
    auto pseudo = pack_pseudo(g, tree, 0.5, seed, opt);
    check_result(g, tree, pseudo);
    auto random = pack_random(g, tree, 0.5, seed, opt);
    check_result(g, tree, random);
    // Same labeled family, so the same factors.
    CHECK(pseudo.factors == random.factors);
    CHECK(pseudo.variant == PackingVariant::kPseudo);
    CHECK(random.variant == PackingVariant::kRandom);
    produced += pseudo.factors.size();
  }
  CHECK(produced > 0);
}

TEST_CASE("targets reported per blow-up") {
  Graph g = generate_gnp(120, 0.9, 5);
  PackOptions opt;
  opt.r_override = 6;
  opt.density = 0.9;
  auto pseudo = pack_pseudo(g, TreeTemplate::path(2), 0.1, 5, opt);
  for (const auto& row : pseudo.per_blowup) {
    // eta = 0.7 and d = 0.9 / (r q) give (1 - 0.7^(1/3)) d nu
    const double rq = pseudo.kappa->expected;
    const double want = (1.0 - std::cbrt(0.7)) * std::min(1.0, 0.9 / rq) * 60.0;
    CHECK(row.target == doctest::Approx(want));
    CHECK_FALSE(row.target_vacuous);
  }
  auto vac = pack_pseudo(g, TreeTemplate::path(2), 0.5, 5, opt);
  for (const auto& row : vac.per_blowup) CHECK(row.target_vacuous);

  auto random = pack_random(g, TreeTemplate::path(2), 0.1, 5, opt);
  for (const auto& row : random.per_blowup) {
    const double q = 0.9 / (1.1 * random.kappa->expected);
    const auto delta = fk_random_delta(60.0, q);
    CHECK(row.target_vacuous == delta.vacuous);
    if (!delta.vacuous) CHECK(row.target == doctest::Approx((1.0 - delta.value) * q * 60.0));
  }
}

TEST_CASE("thread count and repetition do not change the result") {
  Graph g = generate_gnp(90, 0.7, 3);
  PackOptions one, many;
  one.r_override = many.r_override = 10;
  many.threads = 3;
  auto a = pack_pseudo(g, TreeTemplate::path(3), 0.5, 11, one);
  auto b = pack_pseudo(g, TreeTemplate::path(3), 0.5, 11, many);
  auto c = pack_pseudo(g, TreeTemplate::path(3), 0.5, 11, one);
  CHECK(a.factors == b.factors);
  CHECK(a.factors == c.factors);
  CHECK(a.coverage == b.coverage);
}

TEST_CASE("bootstrap on K_12") {
  Graph g = Graph::complete(12);
  TreeTemplate k2 = TreeTemplate::path(2);
  BootstrapPlan plan = make_bootstrap_plan(12, 2, 4, 0.5);
  CHECK(plan.ell == 3);
  plan.outer_r_override = 1;
  auto r = pack_bootstrap(g, k2, plan, 0.5, 7);
  REQUIRE(r.loss.has_value());
  CHECK(r.loss->within_part == 12);
  CHECK(sum_losses(r) == 66);
  CHECK(r.coverage <= Rational(54, 66));
  check_result(g, k2, r);
  // K_{3,3} always decomposes into 3 matchings
  for (const auto& row : r.per_blowup)
    for (std::size_t s : row.matching_counts) CHECK(s == 3);
  CHECK(r.loss->matching_shortfall == 0);
}

TEST_CASE("bootstrap with tau = n reduces to outer factors") {
  Graph g = Graph::complete(8);
  TreeTemplate k2 = TreeTemplate::path(2);
  BootstrapPlan plan = make_bootstrap_plan(8, 2, 8, 0.5);
  plan.outer_r_override = 3;
  auto r = pack_bootstrap(g, k2, plan, 0.5, 2);
  REQUIRE(r.outer.has_value());
  CHECK(r.factors.size() == r.outer->factors);
  CHECK(r.loss->within_part == 0);
  CHECK(sum_losses(r) == 28);
  check_result(g, k2, r);
}

TEST_CASE("bootstrap loss accounting over random configs") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    RandomStream rng(seed, "test-bootstrap", 0);
    const std::size_t t = 2 + rng.below(2);
    const std::size_t tau = t * (2 + rng.below(3));
    const std::size_t n = tau * (2 + rng.below(6));
    Graph g = generate_gnp(n, 0.7, seed);
    TreeTemplate tree = TreeTemplate::path(t);
    BootstrapPlan plan = make_bootstrap_plan(n, t, tau, 0.5);
    plan.outer_r_override = 1 + rng.below(4);
    auto r = pack_bootstrap(g, tree, plan, 0.5, seed);
    CHECK(sum_losses(r) == g.num_edges());
    std::size_t within = 0;
    const std::size_t ell = n / tau;
    for (const Edge& e : g.edges()) within += e.u / ell == e.v / ell;
    CHECK(r.loss->within_part == within);
    check_result(g, tree, r);
    if (r.outer->factors == 0) CHECK_FALSE(r.diagnostic.empty());
  }
}

TEST_CASE("bootstrap within-part loss is about 1/tau") {
  Graph g = generate_gnp(1200, 0.2, 42);
  BootstrapPlan plan = make_bootstrap_plan(1200, 3, 12, 0.5);
  plan.outer_r_override = 20;
  auto r = pack_bootstrap(g, TreeTemplate::path(3), plan, 0.5, 42);
  const double frac = static_cast<double>(r.loss->within_part) / static_cast<double>(g.num_edges());
  CHECK(std::abs(frac - 1.0 / 12.0) <= 0.2 / 12.0);
  CHECK(sum_losses(r) == g.num_edges());
}

TEST_CASE("bootstrap plan validation") {
  CHECK_THROWS_AS(make_bootstrap_plan(12, 2, 5, 0.5), DivisibilityError);
  CHECK_THROWS_AS(make_bootstrap_plan(12, 4, 6, 0.5), DivisibilityError);
  auto plan = make_bootstrap_plan(120, 2, 12, 0.5);
  CHECK(plan.C == doctest::Approx(48.0));
  CHECK(plan.tau0 >= plan.tau1);
  CHECK(plan.tau0 >= 8.0 - 1e-9);
}

TEST_CASE("reference coverage of the seed-42 G(400, 0.9) run") {
  Graph g = generate_gnp(400, 0.9, RandomStream::derive_key(42, "host", 0));
  PackOptions opt;
  opt.r_override = 30;
  opt.density = 0.9;
  auto r = pack_pseudo(g, TreeTemplate::path(2), 0.5, 42, opt);
  CHECK(g.num_edges() == 71745);
  CHECK(r.covered_edges == 20400);
  CHECK(r.coverage == Rational(20400, 71745));
  // Each blow-up yields at most the minimum degree of its labeled pair, and
  // on this run greedy extraction reaches that bound everywhere.
  Procedure1Options p1;
  p1.r_override = 30;
  auto fam = run_procedure1(g, TreeTemplate::path(2), 0.5, 42, p1);
  REQUIRE(r.per_blowup.size() == 30);
  for (std::size_t i = 0; i < 30; ++i) {
    std::vector<std::size_t> degree(400, 0);
    for (const Edge& e : fam.hat_graphs[i].kept_edges) {
      ++degree[e.u];
      ++degree[e.v];
    }
    CHECK(r.per_blowup[i].factors == *std::min_element(degree.begin(), degree.end()));
  }
  check_result(g, TreeTemplate::path(2), r);
}
