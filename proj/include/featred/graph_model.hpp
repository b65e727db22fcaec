#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "featred/bitset.hpp"

namespace featred {

// Vertices are 0-based in the API; serialized forms use 1-based indices.
using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

/// Simple undirected graph on m vertices stored as adjacency bit rows.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int m);

  static Graph from_edges(int m, std::span<const Edge> edges);
  static Graph complete(int m);
  static Graph path(int m);

  int order() const noexcept { return m_; }
  void add_edge(Vertex u, Vertex v);
  bool adjacent(Vertex u, Vertex v) const { return rows_[u].test(static_cast<std::size_t>(v)); }
  const Bitset& neighbors(Vertex v) const { return rows_[v]; }
  int degree(Vertex v) const { return static_cast<int>(rows_[v].count()); }
  std::size_t edge_count() const;
  // Sorted (u, v) pairs with u < v.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int m_ = 0;
  std::vector<Bitset> rows_;
};

// A consistent conflict family: conflicts[v] = T(v), with u in T(v) iff v in T(u), v not in T(v).
using ConflictFamily = std::vector<Bitset>;

ConflictFamily empty_conflicts(int m);
// Adds u to T(v) whenever v is in T(u).
void symmetrize(ConflictFamily& family);
bool is_consistent(const ConflictFamily& family);

/// A realized instance: collinearity edges plus multicollinearity conflict sets.
class Instance {
 public:
  // Throws DomainError when the conflict family is inconsistent or sized wrong.
  Instance(Graph edges, ConflictFamily conflicts);

  // 0-based edge list and conflict lists; conflicts may be given one-sided and are
  // rejected (not repaired) when inconsistent.
  static Instance from_lists(int m, std::span<const Edge> edges,
                             const std::vector<std::vector<Vertex>>& conflicts);

  int order() const noexcept { return edges_.order(); }
  const Graph& edges() const noexcept { return edges_; }
  const ConflictFamily& conflicts() const noexcept { return conflicts_; }
  const Bitset& conflicts_of(Vertex v) const { return conflicts_[v]; }
  std::size_t max_conflict_size() const;
  double mean_conflict_size() const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  Graph edges_;
  ConflictFamily conflicts_;
};

struct ConflictSpec {
  enum class Kind { none, uniform_k };
  Kind kind = Kind::none;
  int k = 0;

  static ConflictSpec none() { return {}; }
  static ConflictSpec uniform(int k) { return {Kind::uniform_k, k}; }
};

/// Each pair is an edge independently with probability p; uniform-k conflicts draw k
/// partners per vertex without replacement before symmetrization.
/// Throws InvalidSpecError when k > m - 1.
Instance sample_instance(int m, double p, const ConflictSpec& spec, std::uint64_t seed);

bool is_nice(std::span<const Vertex> vertices, const Instance& inst);
bool is_nice(const Bitset& vertices, const Instance& inst);

/// u ~ v iff edge(u, v) or u in T(v). Nice sets of inst are exactly its stable sets.
Graph union_conflict_graph(const Instance& inst);

bool is_stable(const Bitset& vertices, const Graph& g);

enum class SolverMethod { exact, greedy, randomized };
std::string_view to_string(SolverMethod method);
std::optional<SolverMethod> parse_solver_method(std::string_view text);

struct NiceSetResult {
  std::vector<Vertex> vertices;  // sorted
  std::size_t size = 0;
  SolverMethod method = SolverMethod::exact;
  std::optional<std::uint64_t> seed;
};

inline constexpr std::uint64_t kDefaultNodeBudget = 50'000'000;
// Largest order the harness and pipeline hand to the exact solver.
inline constexpr int kMaxExactOrder = 60;

/// Maximum stable set by branch and bound with greedy clique-cover bounds.
/// Throws BudgetExceededError (carrying the incumbent) after `node_budget` search nodes.
std::vector<Vertex> max_stable_set(const Graph& g, std::uint64_t node_budget = kDefaultNodeBudget);

NiceSetResult max_nice_exact(const Instance& inst, std::uint64_t node_budget = kDefaultNodeBudget);

enum class TieBreak { smallest_index, random };

/// Min-degree greedy on the union graph: take a minimum residual-degree vertex, drop its
/// closed neighborhood, repeat. Returns a maximal nice set. `seed` is used only for
/// TieBreak::random.
NiceSetResult greedy_nice(const Instance& inst, TieBreak tie_break = TieBreak::smallest_index,
                          std::optional<std::uint64_t> seed = std::nullopt);

/// Sequential random construction: vertices are drawn in uniformly random order and kept
/// when they are neither adjacent to nor in conflict with anything kept so far. Best of
/// `restarts` runs.
NiceSetResult randomized_nice(const Instance& inst, int restarts, std::uint64_t seed);

}  // namespace featred
