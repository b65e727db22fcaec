#include "featred/graph_model.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "featred/errors.hpp"
#include "featred/rng.hpp"

namespace featred {

namespace {

void check_vertex(Vertex v, int m) {
  if (v < 0 || v >= m)
    throw DomainError("vertex " + std::to_string(v) + " out of range [0, " + std::to_string(m) + ")");
}

Bitset to_bitset(std::span<const Vertex> vertices, int m) {
  Bitset b(static_cast<std::size_t>(m));
  for (Vertex v : vertices) {
    check_vertex(v, m);
    b.set(static_cast<std::size_t>(v));
  }
  return b;
}

NiceSetResult make_result(const Bitset& chosen, SolverMethod method, std::optional<std::uint64_t> seed) {
  NiceSetResult r;
  r.vertices = chosen.to_vector();
  r.size = r.vertices.size();
  r.method = method;
  r.seed = seed;
  return r;
}

}  // namespace

Graph::Graph(int m) : m_(m), rows_(static_cast<std::size_t>(m), Bitset(static_cast<std::size_t>(m))) {
  if (m < 0) throw DomainError("graph order must be non-negative");
}

Graph Graph::from_edges(int m, std::span<const Edge> edges) {
  Graph g(m);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

Graph Graph::complete(int m) {
  Graph g(m);
  for (int u = 0; u < m; ++u)
    for (int v = u + 1; v < m; ++v) g.add_edge(u, v);
  return g;
}

Graph Graph::path(int m) {
  Graph g(m);
  for (int v = 0; v + 1 < m; ++v) g.add_edge(v, v + 1);
  return g;
}

void Graph::add_edge(Vertex u, Vertex v) {
  check_vertex(u, m_);
  check_vertex(v, m_);
  if (u == v) throw DomainError("self-loop at vertex " + std::to_string(u));
  rows_[u].set(static_cast<std::size_t>(v));
  rows_[v].set(static_cast<std::size_t>(u));
}

std::size_t Graph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& row : rows_) twice += row.count();
  return twice / 2;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  for (int u = 0; u < m_; ++u)
    rows_[u].for_each([&](std::size_t v) {
      if (static_cast<int>(v) > u) out.emplace_back(u, static_cast<int>(v));
    });
  return out;
}

ConflictFamily empty_conflicts(int m) {
  return ConflictFamily(static_cast<std::size_t>(m), Bitset(static_cast<std::size_t>(m)));
}

void symmetrize(ConflictFamily& family) {
  const std::size_t m = family.size();
  for (std::size_t u = 0; u < m; ++u)
    family[u].for_each([&](std::size_t v) { family[v].set(u); });
}

bool is_consistent(const ConflictFamily& family) {
  const std::size_t m = family.size();
  for (std::size_t v = 0; v < m; ++v) {
    if (family[v].size() != m || family[v].test(v)) return false;
    bool ok = true;
    family[v].for_each([&](std::size_t u) { ok = ok && family[u].test(v); });
    if (!ok) return false;
  }
  return true;
}

Instance::Instance(Graph edges, ConflictFamily conflicts)
    : edges_(std::move(edges)), conflicts_(std::move(conflicts)) {
  if (conflicts_.size() != static_cast<std::size_t>(edges_.order()))
    throw DomainError("conflict family size does not match vertex count");
  if (!is_consistent(conflicts_))
    throw DomainError("conflict family is not consistent (u in T(v) iff v in T(u), v not in T(v))");
}

Instance Instance::from_lists(int m, std::span<const Edge> edges,
                              const std::vector<std::vector<Vertex>>& conflicts) {
  if (m < 1) throw DomainError("instance needs at least one vertex");
  if (conflicts.size() > static_cast<std::size_t>(m))
    throw DomainError("more conflict lists than vertices");
  ConflictFamily family = empty_conflicts(m);
  for (std::size_t v = 0; v < conflicts.size(); ++v)
    for (Vertex u : conflicts[v]) {
      check_vertex(u, m);
      family[v].set(static_cast<std::size_t>(u));
    }
  return Instance(Graph::from_edges(m, edges), std::move(family));
}

std::size_t Instance::max_conflict_size() const {
  std::size_t best = 0;
  for (const auto& t : conflicts_) best = std::max(best, t.count());
  return best;
}

double Instance::mean_conflict_size() const {
  if (conflicts_.empty()) return 0.0;
  std::size_t total = 0;
  for (const auto& t : conflicts_) total += t.count();
  return static_cast<double>(total) / static_cast<double>(conflicts_.size());
}

Instance sample_instance(int m, double p, const ConflictSpec& spec, std::uint64_t seed) {
  if (m < 1) throw DomainError("m must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("edge probability must lie in [0, 1]");
  if (spec.kind == ConflictSpec::Kind::uniform_k && (spec.k < 0 || spec.k > m - 1))
    throw InvalidSpecError("uniform-k conflicts need 0 <= k <= m - 1 (k=" + std::to_string(spec.k) +
                           ", m=" + std::to_string(m) + ")");

  Rng rng(seed);
  Graph g(m);
  for (int u = 0; u < m; ++u)
    for (int v = u + 1; v < m; ++v)
      if (bernoulli(rng, p)) g.add_edge(u, v);

  ConflictFamily family = empty_conflicts(m);
  if (spec.kind == ConflictSpec::Kind::uniform_k && spec.k > 0) {
    std::vector<int> pool(static_cast<std::size_t>(m - 1));
    for (int v = 0; v < m; ++v) {
      // pool = all vertices except v, refilled in index order so the draw depends only on the rng
      for (int u = 0, i = 0; u < m; ++u)
        if (u != v) pool[static_cast<std::size_t>(i++)] = u;
      for (int i = 0; i < spec.k; ++i) {
        const auto j = static_cast<std::size_t>(i) +
                       static_cast<std::size_t>(uniform_below(rng, static_cast<std::uint64_t>(m - 1 - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        family[static_cast<std::size_t>(v)].set(static_cast<std::size_t>(pool[static_cast<std::size_t>(i)]));
      }
    }
    symmetrize(family);
  }
  return Instance(std::move(g), std::move(family));
}

bool is_nice(const Bitset& vertices, const Instance& inst) {
  if (vertices.size() != static_cast<std::size_t>(inst.order()))
    throw DomainError("vertex set width does not match instance order");
  bool nice = true;
  vertices.for_each([&](std::size_t v) {
    if (!nice) return;
    if (inst.edges().neighbors(static_cast<Vertex>(v)).intersects(vertices) ||
        inst.conflicts_of(static_cast<Vertex>(v)).intersects(vertices))
      nice = false;
  });
  return nice;
}

bool is_nice(std::span<const Vertex> vertices, const Instance& inst) {
  return is_nice(to_bitset(vertices, inst.order()), inst);
}

Graph union_conflict_graph(const Instance& inst) {
  const int m = inst.order();
  Graph g = inst.edges();
  for (int v = 0; v < m; ++v)
    inst.conflicts_of(v).for_each([&](std::size_t u) {
      if (static_cast<int>(u) > v) g.add_edge(v, static_cast<Vertex>(u));
    });
  return g;
}

bool is_stable(const Bitset& vertices, const Graph& g) {
  bool stable = true;
  vertices.for_each([&](std::size_t v) {
    stable = stable && !g.neighbors(static_cast<Vertex>(v)).intersects(vertices);
  });
  return stable;
}

std::string_view to_string(SolverMethod method) {
  switch (method) {
    case SolverMethod::exact: return "exact";
    case SolverMethod::greedy: return "greedy";
    case SolverMethod::randomized: return "randomized";
  }
  return "unknown";
}

std::optional<SolverMethod> parse_solver_method(std::string_view text) {
  if (text == "exact") return SolverMethod::exact;
  if (text == "greedy") return SolverMethod::greedy;
  if (text == "randomized") return SolverMethod::randomized;
  return std::nullopt;
}

namespace {

// Branch and bound for a maximum stable set. Candidates are partitioned greedily into
// cliques of g; a stable set meets each clique at most once, so the number of cliques
// covering the candidates bounds how much the current set can still grow.
class StableSetSearch {
 public:
  StableSetSearch(const Graph& g, std::uint64_t budget) : g_(g), budget_(budget) {}

  std::vector<Vertex> run(std::vector<Vertex> incumbent) {
    best_ = std::move(incumbent);
    std::vector<Vertex> current;
    expand(current, Bitset::full(static_cast<std::size_t>(g_.order())));
    std::sort(best_.begin(), best_.end());
    return best_;
  }

 private:
  void expand(std::vector<Vertex>& current, Bitset candidates) {
    if (++nodes_ > budget_) {
      auto witness = best_;
      std::sort(witness.begin(), witness.end());
      throw BudgetExceededError("exact stable-set search exceeded node budget of " + std::to_string(budget_),
                                best_.size(), std::move(witness));
    }
    if (candidates.none()) {
      if (current.size() > best_.size()) best_ = current;
      return;
    }

    std::vector<Vertex> order;
    std::vector<std::size_t> bound;
    Bitset remaining = candidates;
    std::size_t cliques = 0;
    while (remaining.any()) {
      ++cliques;
      Bitset open = remaining;
      while (open.any()) {
        const auto v = open.first();
        open.reset(v);
        open &= g_.neighbors(static_cast<Vertex>(v));
        remaining.reset(v);
        order.push_back(static_cast<Vertex>(v));
        bound.push_back(cliques);
      }
    }

    for (std::size_t i = order.size(); i-- > 0;) {
      if (current.size() + bound[i] <= best_.size()) return;
      const Vertex v = order[i];
      current.push_back(v);
      Bitset next = candidates;
      next.subtract(g_.neighbors(v));
      next.reset(static_cast<std::size_t>(v));
      expand(current, std::move(next));
      current.pop_back();
      candidates.reset(static_cast<std::size_t>(v));
    }
  }

  const Graph& g_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<Vertex> best_;
};

Bitset min_degree_greedy(const Graph& g, TieBreak tie_break, Rng* rng) {
  const int m = g.order();
  Bitset alive = Bitset::full(static_cast<std::size_t>(m));
  Bitset chosen(static_cast<std::size_t>(m));
  std::vector<Vertex> ties;
  while (alive.any()) {
    std::size_t best_degree = std::numeric_limits<std::size_t>::max();
    ties.clear();
    alive.for_each([&](std::size_t v) {
      const std::size_t d = (g.neighbors(static_cast<Vertex>(v)) & alive).count();
      if (d < best_degree) {
        best_degree = d;
        ties.clear();
      }
      if (d == best_degree) ties.push_back(static_cast<Vertex>(v));
    });
    Vertex pick = ties.front();
    if (tie_break == TieBreak::random && ties.size() > 1)
      pick = ties[static_cast<std::size_t>(uniform_below(*rng, ties.size()))];
    chosen.set(static_cast<std::size_t>(pick));
    alive.subtract(g.neighbors(pick));
    alive.reset(static_cast<std::size_t>(pick));
  }
  return chosen;
}

}  // namespace

std::vector<Vertex> max_stable_set(const Graph& g, std::uint64_t node_budget) {
  if (node_budget == 0) throw DomainError("node budget must be positive");
  auto seed_set = min_degree_greedy(g, TieBreak::smallest_index, nullptr).to_vector();
  return StableSetSearch(g, node_budget).run(std::move(seed_set));
}

NiceSetResult max_nice_exact(const Instance& inst, std::uint64_t node_budget) {
  const auto best = max_stable_set(union_conflict_graph(inst), node_budget);
  NiceSetResult r;
  r.vertices = best;
  r.size = best.size();
  r.method = SolverMethod::exact;
  return r;
}

NiceSetResult greedy_nice(const Instance& inst, TieBreak tie_break, std::optional<std::uint64_t> seed) {
  if (tie_break == TieBreak::random && !seed) throw DomainError("random tie-breaking needs a seed");
  std::optional<Rng> rng;
  if (seed) rng.emplace(*seed);
  const auto chosen = min_degree_greedy(union_conflict_graph(inst), tie_break, rng ? &*rng : nullptr);
  return make_result(chosen, SolverMethod::greedy, tie_break == TieBreak::random ? seed : std::nullopt);
}

NiceSetResult randomized_nice(const Instance& inst, int restarts, std::uint64_t seed) {
  if (restarts < 1) throw DomainError("restarts must be at least 1");
  const Graph g = union_conflict_graph(inst);
  const auto m = static_cast<std::size_t>(g.order());
  Bitset best(m);
  std::vector<Vertex> order(m);
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = m; i > 1; --i) std::swap(order[i - 1], order[uniform_below(rng, i)]);
    Bitset kept(m);
    for (Vertex v : order)
      if (!g.neighbors(v).intersects(kept)) kept.set(static_cast<std::size_t>(v));
    if (kept.count() > best.count()) best = kept;
  }
  return make_result(best, SolverMethod::randomized, seed);
}

}  // namespace featred
