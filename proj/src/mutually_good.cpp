#include "featred/mutually_good.hpp"

#include <algorithm>
#include <string>

#include "featred/errors.hpp"

namespace featred {

namespace {

constexpr std::size_t kMaxStoredViolations = 16;

void require_subset(const GoodnessSystem& sys, ElementSet s) {
  if (!s.is_subset_of(sys.universe())) throw DomainError("set is not contained in the universe");
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

// Visits every k-subset of {0..n-1} in increasing bit order (Gosper). Stops when fn returns true.
template <typename F>
bool for_each_k_subset(int n, int k, F&& fn) {
  if (k == 0) return fn(ElementSet{});
  if (k > n) return false;
  const std::uint64_t limit = n >= 64 ? 0 : std::uint64_t{1} << n;
  std::uint64_t s = (k >= 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
  while (true) {
    if (fn(ElementSet(s))) return true;
    const std::uint64_t c = s & (~s + 1);
    const std::uint64_t r = s + c;
    if (r == 0 || (limit && r >= limit)) return false;
    s = (((r ^ s) >> 2) / c) | r;
    if (limit && s >= limit) return false;
  }
}

}  // namespace

GoodnessSystem::GoodnessSystem(int n, GoodnessFn f, ConstraintFn g, std::vector<int> values,
                               std::vector<int> accepting)
    : n_(n), f_(std::move(f)), g_(std::move(g)), values_(std::move(values)), accepting_(std::move(accepting)) {
  if (n < 1 || n > 64) throw DomainError("universe size must lie in [1, 64]");
  if (!f_ || !g_) throw DomainError("goodness and constraint functions are required");
  for (int b : accepting_)
    if (std::find(values_.begin(), values_.end(), b) == values_.end())
      throw DomainError("accepting value " + std::to_string(b) + " is not a constraint value");
  singles_.reserve(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) singles_.push_back(f_(ElementSet{}.with(x)) & universe());
}

GoodnessSystem::GoodnessSystem(int n, std::vector<ElementSet> singles, ConstraintFn g, std::vector<int> values,
                               std::vector<int> accepting)
    : n_(n),
      g_(std::move(g)),
      values_(std::move(values)),
      accepting_(std::move(accepting)),
      singles_(std::move(singles)),
      intersective_(true) {}

GoodnessSystem GoodnessSystem::stable_sets(const Graph& graph) {
  const int n = graph.order();
  if (n < 1 || n > 64) throw DomainError("graph-backed goodness systems need 1 <= N <= 64");
  const ElementSet all = ElementSet::full(n);
  std::vector<ElementSet> singles;
  std::vector<ElementSet> adjacency;
  for (int v = 0; v < n; ++v) {
    ElementSet nbrs;
    graph.neighbors(v).for_each([&](std::size_t u) { nbrs = nbrs.with(static_cast<int>(u)); });
    adjacency.push_back(nbrs);
    singles.push_back(all.minus(nbrs));
  }
  auto g0 = [adjacency](int x, ElementSet i_set) { return (adjacency[static_cast<std::size_t>(x)] & i_set).empty() ? 1 : 0; };
  return GoodnessSystem(n, std::move(singles), std::move(g0), {0, 1}, {1});
}

GoodnessSystem GoodnessSystem::nice_sets(const Instance& inst) {
  const int n = inst.order();
  if (n < 1 || n > 64) throw DomainError("instance-backed goodness systems need 1 <= N <= 64");
  const ElementSet all = ElementSet::full(n);
  std::vector<ElementSet> singles;
  // closed[v] = T(v) u {v}; x is blocked by I iff some v in I has x in closed[v].
  std::vector<ElementSet> closed;
  for (int v = 0; v < n; ++v) {
    ElementSet nbrs;
    inst.edges().neighbors(v).for_each([&](std::size_t u) { nbrs = nbrs.with(static_cast<int>(u)); });
    singles.push_back(all.minus(nbrs));
    ElementSet c = ElementSet{}.with(v);
    inst.conflicts_of(v).for_each([&](std::size_t u) { c = c.with(static_cast<int>(u)); });
    closed.push_back(c);
  }
  auto g = [closed](int x, ElementSet i_set) {
    bool blocked = false;
    i_set.for_each([&](int v) { blocked = blocked || closed[static_cast<std::size_t>(v)].contains(x); });
    return blocked ? 1 : 0;
  };
  return GoodnessSystem(n, std::move(singles), std::move(g), {0, 1}, {0});
}

ElementSet GoodnessSystem::good(ElementSet s) const {
  if (s.empty()) return universe();
  if (!intersective_) return f_(s) & universe();
  ElementSet out = universe();
  s.for_each([&](int v) { out = out & singles_[static_cast<std::size_t>(v)]; });
  return out;
}

bool GoodnessSystem::accepts(int value) const {
  return std::find(accepting_.begin(), accepting_.end(), value) != accepting_.end();
}

ElementSet good_set(const GoodnessSystem& sys, ElementSet s) {
  require_subset(sys, s);
  return sys.good(s);
}

bool is_mutually_good(const GoodnessSystem& sys, ElementSet s) {
  require_subset(sys, s);
  bool ok = true;
  s.for_each([&](int y) {
    if (ok && !s.without(y).is_subset_of(sys.good_single(y))) ok = false;
  });
  return ok;
}

bool is_constrained(const GoodnessSystem& sys, ElementSet s) {
  require_subset(sys, s);
  bool ok = true;
  s.for_each([&](int y) { ok = ok && sys.accepts(sys.constraint(y, s.without(y))); });
  return ok;
}

ElementSet h_set(const GoodnessSystem& sys, ElementSet i_set) {
  require_subset(sys, i_set);
  ElementSet out;
  for (int x = 0; x < sys.size(); ++x)
    if (!sys.accepts(sys.constraint(x, i_set))) out = out.with(x);
  return out;
}

FractionTable compute_fraction_table(const GoodnessSystem& sys, int max_i, std::uint64_t budget) {
  const int n = sys.size();
  if (max_i < 1 || max_i > n) throw DomainError("fraction index must lie in [1, N]");
  std::uint64_t total = 0;
  for (int k = 0; k <= max_i; ++k) total += binomial(n, k);
  if (total > budget)
    throw BudgetExceededError("enumerating " + std::to_string(total) + " subsets exceeds budget of " +
                              std::to_string(budget));

  // best_f[k] / worst_h[k]: extremes over constrained sets of size exactly k (-1 when none).
  std::vector<int> best_f(static_cast<std::size_t>(max_i) + 1, -1);
  std::vector<int> worst_h(static_cast<std::size_t>(max_i) + 1, -1);
  int constrained_singletons = 0;
  for (int k = 0; k <= max_i; ++k) {
    for_each_k_subset(n, k, [&](ElementSet s) {
      if (!is_constrained(sys, s)) return false;
      if (k == 1) ++constrained_singletons;
      const int f_size = sys.good(s).size();
      const int h_size = h_set(sys, s).size();
      auto& bf = best_f[static_cast<std::size_t>(k)];
      auto& wh = worst_h[static_cast<std::size_t>(k)];
      if (bf < 0 || f_size < bf) bf = f_size;
      wh = std::max(wh, h_size);
      return false;
    });
  }

  FractionTable table;
  table.singleton_fraction = {constrained_singletons, n};
  int running_f = best_f[0];
  int running_h = worst_h[0];
  for (int i = 1; i <= max_i; ++i) {
    const auto fi = best_f[static_cast<std::size_t>(i)];
    if (fi >= 0) running_f = std::min(running_f, fi);
    running_h = std::max(running_h, worst_h[static_cast<std::size_t>(i)]);
    table.p.push_back({running_f, n});
    table.q.push_back({running_h, n});
  }
  return table;
}

Fraction compute_p(const GoodnessSystem& sys, int i, std::uint64_t budget) {
  return compute_fraction_table(sys, i, budget).p_at(i);
}

Fraction compute_q(const GoodnessSystem& sys, int i, std::uint64_t budget) {
  return compute_fraction_table(sys, i, budget).q_at(i);
}

double lemma_success_bound(const FractionTable& table, int L, FirstFactor first, std::optional<double> q1_override) {
  if (L < 2) throw DomainError("success bound needs L >= 2");
  if (table.depth() < L - 1) throw DomainError("fraction table does not reach index L - 1");
  double product = 1.0;
  const int start = first == FirstFactor::convention ? 2 : 1;
  for (int j = start; j <= L - 1; ++j) {
    const double factor = table.p_at(j).value() - table.q_at(j).value();
    if (factor <= 0.0) return 0.0;
    product *= factor;
  }
  if (first == FirstFactor::convention) {
    const double leading = 1.0 - q1_override.value_or(0.0);
    if (leading <= 0.0) return 0.0;
    return product * leading;
  }
  return product * table.singleton_fraction.value();
}

std::optional<ElementSet> attempt_construct(const GoodnessSystem& sys, int L, Rng& rng) {
  if (L < 1 || L > sys.size()) throw DomainError("L must lie in [1, N]");
  ElementSet drawn;
  bool collided = false;
  for (int i = 0; i < L; ++i) {
    const int x = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(sys.size())));
    collided = collided || drawn.contains(x);
    drawn = drawn.with(x);
  }
  if (collided || !is_mutually_good(sys, drawn) || !is_constrained(sys, drawn)) return std::nullopt;
  return drawn;
}

std::optional<ElementSet> randomized_construct(const GoodnessSystem& sys, int L, int max_restarts,
                                               std::uint64_t seed) {
  if (max_restarts < 1) throw DomainError("max_restarts must be at least 1");
  Rng rng(seed);
  for (int attempt = 0; attempt < max_restarts; ++attempt)
    if (auto found = attempt_construct(sys, L, rng)) return found;
  return std::nullopt;
}

std::uint64_t count_construct_successes(const GoodnessSystem& sys, int L, std::uint64_t attempts,
                                        std::uint64_t seed) {
  Rng rng(seed);
  std::uint64_t successes = 0;
  for (std::uint64_t a = 0; a < attempts; ++a)
    if (attempt_construct(sys, L, rng)) ++successes;
  return successes;
}

std::optional<ElementSet> brute_force_mutually_good(const GoodnessSystem& sys, int L, std::uint64_t budget) {
  if (L < 0) throw DomainError("L must be non-negative");
  if (L > sys.size()) return std::nullopt;
  const auto combos = binomial(sys.size(), L);
  if (combos > budget)
    throw BudgetExceededError("C(" + std::to_string(sys.size()) + ", " + std::to_string(L) +
                              ") subsets exceed budget of " + std::to_string(budget));
  std::optional<ElementSet> found;
  for_each_k_subset(sys.size(), L, [&](ElementSet s) {
    if (is_mutually_good(sys, s) && is_constrained(sys, s)) {
      found = s;
      return true;
    }
    return false;
  });
  return found;
}

AxiomReport check_goodness_axioms(const GoodnessSystem& sys, AxiomCheckMode mode) {
  AxiomReport report;
  auto check_pair = [&](ElementSet a, ElementSet b, ElementSet fa, ElementSet fb, ElementSet fab) {
    ++report.pairs_checked;
    if (a.is_subset_of(fb) != b.is_subset_of(fa)) {
      ++report.axiom1_violations;
      if (report.examples.size() < kMaxStoredViolations) report.examples.push_back({1, a, b});
    }
    if (fab != (fa & fb)) {
      ++report.axiom2_violations;
      if (report.examples.size() < kMaxStoredViolations) report.examples.push_back({2, a, b});
    }
  };

  const int n = sys.size();
  if (mode.exhaustive) {
    if (n > 12) throw DomainError("exhaustive axiom check needs N <= 12");
    const std::uint64_t count = std::uint64_t{1} << n;
    std::vector<ElementSet> f(count);
    for (std::uint64_t s = 0; s < count; ++s) f[s] = sys.good(ElementSet(s));
    for (std::uint64_t a = 0; a < count; ++a)
      for (std::uint64_t b = 0; b < count; ++b) check_pair(ElementSet(a), ElementSet(b), f[a], f[b], f[a | b]);
    return report;
  }

  Rng rng(mode.seed);
  const std::uint64_t mask = ElementSet::full(n).bits();
  for (std::uint64_t i = 0; i < mode.samples; ++i) {
    const ElementSet a(rng() & mask);
    const ElementSet b(rng() & mask);
    check_pair(a, b, sys.good(a), sys.good(b), sys.good(a | b));
  }
  return report;
}

}  // namespace featred
