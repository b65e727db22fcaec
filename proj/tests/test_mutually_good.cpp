#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "featred/errors.hpp"
#include "featred/harness.hpp"
#include "featred/mutually_good.hpp"
#include "oracles.hpp"

using namespace featred;

namespace {

// 0-based path 0-1-2-3 (the 1-based path 1-2-3-4).
GoodnessSystem path4() { return GoodnessSystem::stable_sets(Graph::path(4)); }
GoodnessSystem edgeless(int n) { return GoodnessSystem::stable_sets(Graph(n)); }
GoodnessSystem complete(int n) { return GoodnessSystem::stable_sets(Graph::complete(n)); }

// Same f0 as a plain callable, so good() goes through the user-function path.
GoodnessSystem callable_f0(const Graph& g) {
  const int n = g.order();
  auto f = [g, n](ElementSet s) {
    ElementSet out;
    for (int x = 0; x < n; ++x) {
      bool ok = true;
      s.for_each([&](int v) { ok = ok && !g.adjacent(x, v); });
      if (ok) out = out.with(x);
    }
    return out;
  };
  auto g0 = [g](int x, ElementSet s) {
    bool adjacent = false;
    s.for_each([&](int v) { adjacent = adjacent || g.adjacent(x, v); });
    return adjacent ? 0 : 1;
  };
  return GoodnessSystem(n, f, g0, {0, 1}, {1});
}

Fraction frac(std::int64_t a, std::int64_t b) { return {a, b}; }

}  // namespace

TEST_SUITE("mutually-good") {
  TEST_CASE("good_set") {
    CHECK(good_set(path4(), ElementSet{1}) == ElementSet{1, 3});
    CHECK(good_set(path4(), ElementSet{}) == ElementSet::full(4));
    CHECK(good_set(edgeless(5), ElementSet{0, 3}) == ElementSet::full(5));
    CHECK_THROWS_AS(good_set(path4(), ElementSet{5}), DomainError);
  }

  TEST_CASE("is_mutually_good") {
    CHECK(is_mutually_good(path4(), ElementSet{2}));
    CHECK(is_mutually_good(path4(), ElementSet{0, 2}));
    CHECK_FALSE(is_mutually_good(path4(), ElementSet{0, 1}));
    CHECK(is_mutually_good(path4(), ElementSet{}));
  }

  TEST_CASE("is_constrained and h_set") {
    CHECK(is_constrained(path4(), ElementSet{0, 2}));
    CHECK_FALSE(is_constrained(path4(), ElementSet{1, 2}));
    CHECK(is_constrained(path4(), ElementSet{}));

    CHECK(h_set(path4(), ElementSet{1}) == ElementSet{0, 2});
    CHECK(h_set(path4(), ElementSet{}) == ElementSet{});
    CHECK(h_set(complete(4), ElementSet{0}) == ElementSet{1, 2, 3});
  }

  TEST_CASE("conflict constraint accepts exactly the vertices outside T(v) u {v}") {
    std::vector<std::vector<Vertex>> conflicts{{2}, {}, {0}, {}};
    const auto inst = Instance::from_lists(4, std::vector<Edge>{{0, 1}}, conflicts);
    const auto sys = GoodnessSystem::nice_sets(inst);
    CHECK(h_set(sys, ElementSet{0}) == ElementSet{0, 2});
    CHECK(h_set(sys, ElementSet{}) == ElementSet{});
    CHECK(is_constrained(sys, ElementSet{0, 3}));
    CHECK_FALSE(is_constrained(sys, ElementSet{0, 2}));
    CHECK(is_mutually_good(sys, ElementSet{0, 2}));  // no edge, only a conflict
    CHECK_FALSE(is_mutually_good(sys, ElementSet{0, 1}));
  }

  TEST_CASE("mutually good constrained sets of the nice-set system are the nice sets") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto inst = sample_instance(8, 0.3, ConflictSpec::uniform(1), seed);
      const auto sys = GoodnessSystem::nice_sets(inst);
      for (std::uint64_t mask = 0; mask < 256; ++mask) {
        const ElementSet s(mask);
        REQUIRE((is_mutually_good(sys, s) && is_constrained(sys, s)) == oracle::nice_by_definition(mask, inst));
      }
    }
  }

  TEST_CASE("compute_p and compute_q examples") {
    CHECK(compute_p(path4(), 1) == frac(1, 2));
    CHECK(compute_q(path4(), 1) == frac(1, 2));
    for (int i = 1; i <= 4; ++i) {
      CHECK(compute_p(edgeless(4), i) == frac(1, 1));
      CHECK(compute_q(edgeless(4), i) == frac(0, 1));
    }
    CHECK(compute_p(complete(4), 1) == frac(1, 4));
    CHECK(compute_q(complete(4), 1) == frac(3, 4));
    CHECK_THROWS_AS(compute_p(path4(), 0), DomainError);
    CHECK_THROWS_AS(compute_p(edgeless(20), 10, 1000), BudgetExceededError);
  }

  TEST_CASE("p is non-increasing and q non-decreasing") {
    Rng rng(11);
    for (int s = 0; s < 60; ++s) {
      const auto sys = GoodnessSystem::nice_sets(random_lemma_instance(10, rng));
      const auto table = compute_fraction_table(sys, sys.size());
      for (int i = 2; i <= table.depth(); ++i) {
        CHECK(table.p_at(i) <= table.p_at(i - 1));
        CHECK(table.q_at(i) >= table.q_at(i - 1));
      }
    }
  }

  TEST_CASE("lemma_success_bound") {
    FractionTable t;
    t.p = {frac(1, 1), frac(3, 5)};
    t.q = {frac(0, 1), frac(1, 10)};
    CHECK(lemma_success_bound(t, 3) == doctest::Approx(0.5));
    CHECK(lemma_success_bound(t, 2) == doctest::Approx(1.0));
    CHECK(lemma_success_bound(t, 3, FirstFactor::convention, 0.2) == doctest::Approx(0.4));
    t.p[1] = frac(3, 10);
    t.q[1] = frac(4, 10);
    CHECK(lemma_success_bound(t, 3) == 0.0);
    CHECK_THROWS_AS(lemma_success_bound(t, 1), DomainError);
    CHECK_THROWS_AS(lemma_success_bound(t, 4), DomainError);

    // Enumerated first factor on the path: p_1 = q_1 = 1/2.
    const auto path_table = compute_fraction_table(path4(), 1);
    CHECK(lemma_success_bound(path_table, 2, FirstFactor::definitional) == 0.0);
    // The p_1 = 1 convention claims certainty, above the true rate 6/16.
    CHECK(lemma_success_bound(path_table, 2) == 1.0);
    CHECK(oracle::exact_attempt_success(path4(), 2) == doctest::Approx(6.0 / 16.0));
  }

  TEST_CASE("definitional bound never exceeds the exact per-attempt success probability") {
    Rng rng(5);
    for (int s = 0; s < 40; ++s) {
      const auto sys = GoodnessSystem::nice_sets(random_lemma_instance(6, rng));
      const auto table = compute_fraction_table(sys, sys.size());
      for (int L = 2; L <= std::min(sys.size(), 4); ++L)
        CHECK(lemma_success_bound(table, L, FirstFactor::definitional) <=
              oracle::exact_attempt_success(sys, L) + 1e-12);
    }
  }

  TEST_CASE("randomized_construct") {
    const auto path = path4();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto found = randomized_construct(path, 2, 50, seed);
      REQUIRE(found.has_value());
      CHECK(found->size() == 2);
      CHECK(is_mutually_good(path, *found));
      CHECK(randomized_construct(path, 2, 50, seed) == found);
      CHECK_FALSE(randomized_construct(complete(4), 2, 50, seed).has_value());
    }
    const auto all = randomized_construct(edgeless(4), 4, 2000, 9);
    REQUIRE(all.has_value());
    CHECK(*all == ElementSet::full(4));
    CHECK_THROWS_AS(randomized_construct(path, 5, 10, 1), DomainError);
    CHECK_THROWS_AS(randomized_construct(path, 2, 0, 1), DomainError);

    // Per-attempt frequency against the enumerated rate 6/16.
    const std::uint64_t attempts = 20000;
    const double freq = static_cast<double>(count_construct_successes(path, 2, attempts, 17)) / attempts;
    CHECK(std::abs(freq - 0.375) <= 3 * std::sqrt(0.375 * 0.625 / attempts));
  }

  TEST_CASE("brute_force_mutually_good") {
    CHECK(brute_force_mutually_good(edgeless(4), 4) == ElementSet::full(4));
    CHECK_FALSE(brute_force_mutually_good(complete(4), 2).has_value());
    const auto pair = brute_force_mutually_good(path4(), 2);
    REQUIRE(pair.has_value());
    CHECK(*pair == ElementSet{0, 2});
    CHECK_FALSE(brute_force_mutually_good(path4(), 5).has_value());
    CHECK_THROWS_AS(brute_force_mutually_good(edgeless(30), 15, 1000), BudgetExceededError);
  }

  TEST_CASE("existence condition holds up on random nice-set systems") {
    Rng rng(21);
    for (int s = 0; s < 100; ++s) {
      const auto sys = GoodnessSystem::nice_sets(random_lemma_instance(8, rng));
      CHECK(check_lemma_on_system(sys).failed_sizes.empty());
    }
  }

  TEST_CASE("with the bare non-adjacency constraint, repeated draws break the existence claim") {
    // One edge on 5 vertices: largest stable set has 4 vertices, yet p_4 = 4/5 > q_4 = 1/5.
    const auto sys = GoodnessSystem::stable_sets(Graph::from_edges(5, std::vector<Edge>{{0, 1}}));
    const auto table = compute_fraction_table(sys, 4);
    CHECK(table.p_at(4) == frac(4, 5));
    CHECK(table.q_at(4) == frac(1, 5));
    CHECK_FALSE(brute_force_mutually_good(sys, 5).has_value());
    // The conflict constraint counts the set's own members as blocked, which restores it.
    const auto nice = GoodnessSystem::nice_sets(Instance(Graph::from_edges(5, std::vector<Edge>{{0, 1}}), empty_conflicts(5)));
    CHECK(check_lemma_on_system(nice).failed_sizes.empty());
  }

  TEST_CASE("pairwise test agrees with the subset definition") {
    Rng rng(8);
    for (int s = 0; s < 30; ++s) {
      const int n = 2 + static_cast<int>(uniform_below(rng, 9));
      Graph g(n);
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
          if (bernoulli(rng, 0.4)) g.add_edge(u, v);
      for (const auto& sys : {GoodnessSystem::stable_sets(g), callable_f0(g)}) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
          const ElementSet set(mask);
          if (set.size() > 5) continue;
          REQUIRE(is_mutually_good(sys, set) == oracle::mutually_good_by_definition(sys, set));
        }
      }
    }
  }

  TEST_CASE("f(I) is the intersection of f({v}) over I") {
    Rng rng(4);
    for (int s = 0; s < 10; ++s) {
      const int n = 3 + static_cast<int>(uniform_below(rng, 6));
      Graph g(n);
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
          if (bernoulli(rng, 0.5)) g.add_edge(u, v);
      const auto sys = callable_f0(g);
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        ElementSet meet = ElementSet::full(n);
        ElementSet(mask).for_each([&](int v) { meet = meet & sys.good(ElementSet{}.with(v)); });
        REQUIRE(sys.good(ElementSet(mask)) == meet);
      }
    }
  }

  TEST_CASE("goodness axioms") {
    Rng rng(2);
    for (int s = 0; s < 10; ++s) {
      Graph g(5);
      for (int u = 0; u < 5; ++u)
        for (int v = u + 1; v < 5; ++v)
          if (bernoulli(rng, 0.5)) g.add_edge(u, v);
      const auto report = check_goodness_axioms(callable_f0(g));
      CHECK(report.ok());
      CHECK(report.pairs_checked == 1024);
    }

    auto any_g = [](int, ElementSet) { return 1; };
    const GoodnessSystem constant(5, [](ElementSet) { return ElementSet::full(5); }, any_g, {0, 1}, {1});
    CHECK(check_goodness_axioms(constant).ok());

    // Complement is a goodness function too: S1 within U\S2 iff the sets are disjoint.
    const GoodnessSystem complement(4, [](ElementSet s) { return ElementSet::full(4).minus(s); }, any_g, {0, 1}, {1});
    CHECK(check_goodness_axioms(complement).ok());

    // Identity breaks the intersection axiom: f({0} u {1}) = {0,1} but f({0}) n f({1}) = {}.
    const GoodnessSystem identity(4, [](ElementSet s) { return s; }, any_g, {0, 1}, {1});
    const auto id_report = check_goodness_axioms(identity);
    CHECK(id_report.axiom2_violations > 0);
    CHECK_FALSE(id_report.examples.empty());

    // A one-way relation (0 -> 1) keeps intersections but breaks symmetry.
    const GoodnessSystem directed(
        3,
        [](ElementSet s) { return s.contains(0) ? ElementSet{0, 2} : ElementSet::full(3); },
        any_g, {0, 1}, {1});
    const auto dir_report = check_goodness_axioms(directed);
    CHECK(dir_report.axiom1_violations > 0);
    CHECK(dir_report.axiom2_violations == 0);
    const bool found = std::any_of(dir_report.examples.begin(), dir_report.examples.end(), [](const AxiomViolation& v) {
      return v.axiom == 1 && v.first == ElementSet{0} && v.second == ElementSet{1};
    });
    CHECK(found);

    const auto sampled = check_goodness_axioms(identity, AxiomCheckMode::sampled(500, 3));
    CHECK(sampled.pairs_checked == 500);
    CHECK(sampled.axiom2_violations > 0);
    CHECK_THROWS_AS(check_goodness_axioms(edgeless(13)), DomainError);
  }

  TEST_CASE("system construction errors") {
    auto f = [](ElementSet s) { return s; };
    auto g = [](int, ElementSet) { return 0; };
    CHECK_THROWS_AS(GoodnessSystem(0, f, g, {0}, {0}), DomainError);
    CHECK_THROWS_AS(GoodnessSystem(3, f, g, {0, 1}, {2}), DomainError);
    CHECK_THROWS_AS(GoodnessSystem::stable_sets(Graph(65)), DomainError);
  }
}
